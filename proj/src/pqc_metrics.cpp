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

#include "qfusion/pqc_metrics.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "qfusion/common.hpp"
#include "qfusion/rng.hpp"

namespace qfusion::pqc {

namespace {

std::vector<double> draw_angles(std::size_t count, std::uint64_t seed,
                                std::uint64_t stream) {
    auto engine = rng::make_engine(rng::substream_seed(seed, stream));
    std::uniform_real_distribution<double> angle(0.0,
                                                 2.0 * std::numbers::pi);
    std::vector<double> out(count);
    for (double &v : out) {
        v = angle(engine);
    }
    return out;
}

sim::StateVector run_from_zero(const circuit::Circuit &c,
                               const std::vector<double> &params) {
    sim::StateVector psi(c.num_qubits());
    circuit::execute(circuit::bind_params(c, params), psi);
    return psi;
}

double pair_fidelity(const sim::StateVector &a, const sim::StateVector &b) {
    cdouble overlap = 0.0;
    const auto &av = a.amplitudes();
    const auto &bv = b.amplitudes();
    for (std::size_t i = 0; i < av.size(); ++i) {
        overlap += std::conj(av[i]) * bv[i];
    }
    return std::norm(overlap);
}

} // namespace

double haar_bin_probability(double lo, double hi, std::int64_t dim) {
    detail::require(dim >= 2, "haar density needs dimension >= 2");
    detail::require(0.0 <= lo && lo < hi && hi <= 1.0,
                    "haar bin bounds must satisfy 0 <= lo < hi <= 1");
    const auto n = static_cast<double>(dim);
    return std::pow(1.0 - lo, n - 1.0) - std::pow(1.0 - hi, n - 1.0);
}

ExpressibilityReport expressibility(const circuit::Circuit &c,
                                    int num_samples, int num_bins,
                                    std::uint64_t seed) {
    detail::require(num_samples >= 1, "expressibility needs samples");
    detail::require(num_bins >= 2, "expressibility histogram bins degenerate");

    ExpressibilityReport report;
    report.num_samples = num_samples;
    report.num_bins = num_bins;
    report.seed = seed;

    if (c.num_params() == 0) {
        report.untrainable = true;
        report.kl_divergence = std::numeric_limits<double>::infinity();
        return report;
    }

    const auto param_count = static_cast<std::size_t>(c.num_params());
    std::vector<double> fidelities(static_cast<std::size_t>(num_samples));

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < num_samples; ++i) {
        const auto stream = static_cast<std::uint64_t>(i);
        const sim::StateVector lhs =
            run_from_zero(c, draw_angles(param_count, seed, 2 * stream));
        const sim::StateVector rhs =
            run_from_zero(c, draw_angles(param_count, seed, 2 * stream + 1));
        fidelities[static_cast<std::size_t>(i)] = pair_fidelity(lhs, rhs);
    }

    std::vector<std::int64_t> counts(static_cast<std::size_t>(num_bins), 0);
    for (const double f : fidelities) {
        auto bin = static_cast<std::int64_t>(f * num_bins);
        bin = std::min<std::int64_t>(std::max<std::int64_t>(bin, 0),
                                     num_bins - 1);
        ++counts[static_cast<std::size_t>(bin)];
    }

    const std::int64_t dim = std::int64_t{1} << c.num_qubits();
    double kl = 0.0;
    for (int b = 0; b < num_bins; ++b) {
        const auto hits = counts[static_cast<std::size_t>(b)];
        if (hits == 0) {
            continue;
        }
        const double p =
            static_cast<double>(hits) / static_cast<double>(num_samples);
        const double lo = static_cast<double>(b) / num_bins;
        const double hi = static_cast<double>(b + 1) / num_bins;
        const double q = haar_bin_probability(lo, hi, dim);
        if (q <= 0.0) {
            kl = std::numeric_limits<double>::infinity();
            break;
        }
        kl += p * std::log(p / q);
    }
    // Finite sampling can estimate slightly below zero only through
    // rounding; the divergence itself is nonnegative.
    report.kl_divergence = std::max(kl, 0.0);
    return report;
}

double meyer_wallach_q(const sim::StateVector &psi) {
    const int n = psi.num_qubits();
    double purity_sum = 0.0;
    for (int q = 0; q < n; ++q) {
        const sim::GateMatrix1 rho = sim::reduced_density_1q(psi, q);
        purity_sum += std::norm(rho[0]) + std::norm(rho[1]) +
                      std::norm(rho[2]) + std::norm(rho[3]);
    }
    return 2.0 * (1.0 - purity_sum / static_cast<double>(n));
}

EntanglingCapacityReport entangling_capacity(const circuit::Circuit &c,
                                             int num_samples,
                                             std::uint64_t seed) {
    detail::require(num_samples >= 1, "entangling capacity needs samples");

    EntanglingCapacityReport report;
    report.num_samples = num_samples;
    report.seed = seed;

    const auto param_count = static_cast<std::size_t>(c.num_params());
    std::vector<double> qs(static_cast<std::size_t>(num_samples));

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < num_samples; ++i) {
        const sim::StateVector psi = run_from_zero(
            c,
            draw_angles(param_count, seed, static_cast<std::uint64_t>(i)));
        qs[static_cast<std::size_t>(i)] = meyer_wallach_q(psi);
    }

    double acc = 0.0;
    for (const double q : qs) {
        acc += q;
    }
    report.mean_q = acc / static_cast<double>(num_samples);
    return report;
}

} // namespace qfusion::pqc
