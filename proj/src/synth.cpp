// Copyright 2026 The qfusion Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfusion/dataio.hpp"

#include <array>
#include <cmath>
#include <random>

#include "qfusion/common.hpp"
#include "qfusion/rng.hpp"

namespace qfusion::data {
namespace {

// Per-coordinate mean and spread of the ReLU-censored Gaussian feature
// marginals. Low-mean coordinates censor to exact zeros a few percent of
// the time, mimicking penultimate-layer activations.
constexpr std::array<double, 16> kFeatureMean = {
    0.9, 0.4, 1.1, 0.7, 0.3, 1.3, 0.6, 0.8,
    1.0, 0.5, 0.7, 1.2, 0.4, 0.9, 0.6, 1.1};
constexpr std::array<double, 16> kFeatureSpread = {
    0.35, 0.25, 0.40, 0.30, 0.20, 0.45, 0.30, 0.35,
    0.40, 0.25, 0.30, 0.40, 0.20, 0.35, 0.25, 0.40};

// Symmetric coefficient matrix of the target's quadratic form in the
// normalized feature vector. Frozen from a seeded 4-qubit readout so the
// quantum fusion model can represent the clean target exactly.
constexpr std::array<std::array<double, 16>, 16> kTargetQuadratic = {{
    {{-0.00050201175589759117, -0.076570953624627097, -0.16624094379555338, 0.0027985401410285937, -0.015100473392480898, 0.16133759905184067, -0.35962601089744894, -0.64525895190855531, 0.12893066563110955, -0.29603061346048842, 0.12925498651162748, -0.029872191571222784, 0.10653580307535335, 0.2615876988166399, 0.077667072393483888, 0.26455286554006541}},
    {{-0.076570953624627097, 0.44332361195906017, -0.29905834112696661, -0.16622964844983179, -0.050769440511217526, -0.056285573240343487, -0.095636553925193851, -0.30420308622322684, 0.22836811630131704, -0.29258311309757246, -0.017294672268747202, -0.38538261677527452, 0.071049090629389813, -0.24356408333205007, -0.15642772949659906, -0.059112645280062714}},
    {{-0.16624094379555338, -0.29905834112696661, 0.45210932202212362, 0.23176672195996498, 0.45655045970866931, -0.0055744197249815164, 0.25564816818052949, 0.14083734479646551, 0.23923495271298723, -0.15186775414403733, 0.24718803133561859, 0.10419829025198968, 0.21361633026535753, -0.05107474805342066, 0.096611675798464206, -0.057217621897252345}},
    {{0.0027985401410285937, -0.16622964844983179, 0.23176672195996498, -0.46194393836518649, 0.096199431460735396, -0.18685146149493709, 0.32637336999878458, -0.048767960941484868, -0.34799254853058559, 0.24459343651748344, 0.001116965635527184, 0.36709379555892729, -0.43047829555233152, 0.051107653639423954, 0.2719481204648081, -0.51833706129086932}},
    {{-0.015100473392480898, -0.050769440511217526, 0.45655045970866931, 0.096199431460735396, -0.17758280867328505, -0.0024740605715803179, -0.16621507874147529, -0.40724806408508407, 0.11057132973755487, -0.32505966693888311, -0.060640285726575725, -0.22671262591989572, -0.21254442691616104, 0.56646185132285698, -0.61092996088145912, 0.30440068005625104}},
    {{0.16133759905184067, -0.056285573240343487, -0.0055744197249815164, -0.18685146149493709, -0.0024740605715803179, -0.16196142431447999, 0.21380393821544863, 0.17772806729874469, -0.35303336651742534, 0.2489020654765266, -0.41045248294593178, 0.38148851984754434, -0.011300662860667804, -0.3324084643988704, 0.077027670612124233, 0.10890178399079652}},
    {{-0.35962601089744894, -0.095636553925193851, 0.25564816818052949, 0.32637336999878458, -0.16621507874147529, 0.21380393821544863, -0.88972889793505705, 0.13428227300935552, 0.13363133378601966, -0.052393721853990591, 0.53963292933902807, -0.40762132845795307, -0.12712560436661474, -0.34477965391875626, -0.16173207291039143, -0.038250756836143596}},
    {{-0.64525895190855531, -0.30420308622322684, 0.14083734479646551, -0.048767960941484868, -0.40724806408508407, 0.17772806729874469, 0.13428227300935552, 1.0332651294277966, 0.28618617475092656, 0.21936282183003464, -0.4516085141898265, 0.026661768116880757, -0.2898943670837314, -0.24529965608165849, 0.38162806143438149, -0.034181160016895806}},
    {{0.12893066563110955, 0.22836811630131704, 0.23923495271298723, -0.34799254853058559, 0.11057132973755487, -0.35303336651742534, 0.13363133378601966, 0.28618617475092656, -0.27702424765880118, 0.22084888589254312, -0.10468037875173374, -0.23993531714599584, 0.1127806694538574, 0.18082354682058233, -0.19140765140037702, 0.18337656581728781}},
    {{-0.29603061346048842, -0.29258311309757246, -0.15186775414403733, 0.24459343651748344, -0.32505966693888311, 0.2489020654765266, -0.052393721853990591, 0.21936282183003464, 0.22084888589254312, 0.076145692195542847, -0.0058255055714447265, -0.051644832583460316, -0.082222521067305404, 0.13082021649191133, -0.27079619624997514, -0.15585176354667521}},
    {{0.12925498651162748, -0.017294672268747202, 0.24718803133561859, 0.001116965635527184, -0.060640285726575725, -0.41045248294593178, 0.53963292933902807, -0.4516085141898265, -0.10468037875173374, -0.0058255055714447265, 0.35884357579264159, -0.23867564133635361, -0.18002377069074738, -0.21339168100688821, -0.33728306291325233, -0.12612208589831228}},
    {{-0.029872191571222784, -0.38538261677527452, 0.10419829025198968, 0.36709379555892729, -0.22671262591989572, 0.38148851984754434, -0.40762132845795307, 0.026661768116880757, -0.23993531714599584, -0.051644832583460316, -0.23867564133635361, -0.44167156074343639, -0.024004137029302194, -0.37615279777918992, 0.23329096841840463, 0.39325527127453092}},
    {{0.10653580307535335, 0.071049090629389813, 0.21361633026535753, -0.43047829555233152, -0.21254442691616104, -0.011300662860667804, -0.12712560436661474, -0.2898943670837314, 0.1127806694538574, -0.082222521067305404, -0.18002377069074738, -0.024004137029302194, 0.16894312848242196, 0.11062151022950038, -0.36979000438863469, -0.0050850047677789278}},
    {{0.2615876988166399, -0.24356408333205007, -0.05107474805342066, 0.051107653639423954, 0.56646185132285698, -0.3324084643988704, -0.34477965391875626, -0.24529965608165849, 0.18082354682058233, 0.13082021649191133, -0.21339168100688821, -0.37615279777918992, 0.11062151022950038, -0.017060297174089495, -0.12815379544977615, 0.029874645313751017}},
    {{0.077667072393483888, -0.15642772949659906, 0.096611675798464206, 0.2719481204648081, -0.61092996088145912, 0.077027670612124233, -0.16173207291039143, 0.38162806143438149, -0.19140765140037702, -0.27079619624997514, -0.33728306291325233, 0.23329096841840463, -0.36979000438863469, -0.12815379544977615, -0.04664265241362496, -0.064440326420742586}},
    {{0.26455286554006541, -0.059112645280062714, -0.057217621897252345, -0.51833706129086932, 0.30440068005625104, 0.10890178399079652, -0.038250756836143596, -0.034181160016895806, 0.18337656581728781, -0.15585176354667521, -0.12612208589831228, 0.39325527127453092, -0.0050850047677789278, 0.029874645313751017, -0.064440326420742586, -0.058512620845728586}}
}};

// Constant offset of the target (keeps labels on a positive scale).
constexpr double kTargetOffset = 0.45;

} // namespace

// Measured over 40000 generator draws with zero label noise.
const double kSynthTargetStd = 0.13903971097533308;

double synth_target(const std::vector<double> &features) {
    detail::require(
        features.size() == static_cast<std::size_t>(kFusionFeatures),
        "synthetic target needs 16 features");
    double n2 = 0.0;
    for (double x : features) {
        n2 += x * x;
    }
    detail::require(n2 > 0.0, "synthetic target undefined at the zero vector");
    const double inv = 1.0 / std::sqrt(n2);
    double acc = 0.0;
    for (int r = 0; r < kFusionFeatures; ++r) {
        const double ur = features[static_cast<std::size_t>(r)] * inv;
        double row = 0.0;
        for (int c = 0; c < kFusionFeatures; ++c) {
            row += kTargetQuadratic[static_cast<std::size_t>(r)]
                                   [static_cast<std::size_t>(c)] *
                   features[static_cast<std::size_t>(c)] * inv;
        }
        acc += ur * row;
    }
    return kTargetOffset + acc;
}

Dataset synth_dataset(int n, std::uint64_t seed, double noise_sigma) {
    detail::require(n >= 1, "dataset size must be positive");
    detail::require(noise_sigma >= 0.0, "noise sigma must be nonnegative");
    Dataset out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::mt19937_64 engine = rng::make_engine(
            rng::substream_seed(seed, static_cast<std::uint64_t>(i)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        FusionSample sample;
        sample.id = "synth-" + std::to_string(i);
        sample.features.resize(kFusionFeatures);
        // Resample degenerate draws: both 8-feature halves must have
        // nonzero norm so every encoder accepts every sample.
        while (true) {
            double lo = 0.0;
            double hi = 0.0;
            for (int f = 0; f < kFusionFeatures; ++f) {
                const auto fi = static_cast<std::size_t>(f);
                const double v =
                    kFeatureMean[fi] + kFeatureSpread[fi] * gauss(engine);
                const double censored = v > 0.0 ? v : 0.0;
                sample.features[fi] = censored;
                (f < kFusionFeatures / 2 ? lo : hi) += censored * censored;
            }
            if (lo > 0.0 && hi > 0.0) {
                break;
            }
        }
        sample.affinity =
            synth_target(sample.features) + noise_sigma * gauss(engine);
        out.push_back(std::move(sample));
    }
    return out;
}

} // namespace qfusion::data
