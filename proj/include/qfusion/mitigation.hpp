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

/**
 * @file mitigation.hpp
 * Error mitigation: a learned regression layer that corrects noisy
 * expectation vectors (DREM), and zero-noise extrapolation over globally
 * folded circuits (ZNE) as the comparison method.
 *
 * The DREM layer trains once on (noisy, noiseless) expectation pairs
 * collected from randomly initialized circuits, then freezes. Applying it
 * is one dense forward pass: no circuit execution, hence no quantum
 * overhead at inference time. ZNE instead pays for every evaluation with
 * folded-circuit executions.
 */

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qfusion/dataio.hpp"
#include "qfusion/encoding.hpp"
#include "qfusion/nn.hpp"
#include "qfusion/noise.hpp"
#include "qfusion/qnn.hpp"
#include "qfusion/training.hpp"

namespace qfusion::mitigation {

/// Correction net over k expectations: k -> 32 -> 16 -> k (ReLU, ReLU,
/// Identity). 756 parameters at k = 4.
struct DremLayer {
    nn::DenseNet net;
    double l2_alpha = 1e-5;
    bool frozen = false;
};

/// Unfrozen, zero-initialized layer for k expectations.
DremLayer make_drem_layer(int k);

struct DremCorpus {
    struct Pair {
        std::vector<double> noisy;
        std::vector<double> noiseless;
    };
    std::vector<Pair> pairs;

    // Provenance of the generating run.
    noise::ChannelKind channel = noise::ChannelKind::Depolarizing;
    double p = 0.0;
    int ansatz_id = 1;
    int layers = 10;
    int num_qnns = 0;
    std::uint64_t seed = 0;
};

/**
 * Draws `num_qnns` randomly initialized circuits (ansatz/layers as given,
 * one seeded substream each) and records, for every input feature vector,
 * the noisy and noiseless expectation vectors. Corpus size is
 * num_qnns * inputs.size().
 */
DremCorpus build_drem_corpus(int num_qnns, int ansatz_id, int layers,
                             const encoding::EncoderConfig &encoder,
                             noise::ChannelKind channel, double p,
                             const std::vector<std::vector<double>> &inputs,
                             std::uint64_t seed);

/// Feature vectors of a dataset, in order (corpus input helper).
std::vector<std::vector<double>> feature_vectors(const data::Dataset &samples);

/// Mean squared error of the raw noisy vectors against the noiseless ones.
double corpus_mse_unmitigated(const DremCorpus &corpus);

/// Mean squared error of layer(noisy) against noiseless.
double corpus_mse_mitigated(const DremLayer &layer, const DremCorpus &corpus);

/**
 * Trains the correction net on the corpus, minimizing
 * MSE(net(noisy), noiseless) + alpha * ||weights||^2 with Adam under
 * `config` (batching, epochs, seed, validation fraction for best-epoch
 * retention). Inputs are standardized for training and the affine
 * transform is folded back into the first layer, so the returned layer
 * consumes raw noisy expectations. The returned layer is frozen.
 */
DremLayer train_drem(const DremCorpus &corpus, double alpha,
                     const training::TrainConfig &config);

/// One forward pass through the frozen layer. Runs no circuits.
std::vector<double> apply_drem(const DremLayer &layer,
                               const std::vector<double> &noisy_expectations);

void save_drem(const DremLayer &layer, std::uint64_t seed,
               const std::string &path);
DremLayer load_drem(const std::string &path);

void save_corpus(const DremCorpus &corpus, const std::string &path);
DremCorpus load_corpus(const std::string &path);

/**
 * Zero-noise extrapolation of the model's expectations. Runs the globally
 * folded circuit at every scale factor under the channel, then extrapolates
 * each qubit's <Z> to scale 0: Richardson (linear) for two points, a
 * least-squares polynomial of degree min(points - 1, 2) otherwise.
 * scale_factors must be ascending, odd, and start at 1.
 */
std::vector<double> zne_estimate(const qnn::QnnModel &model,
                                 const std::vector<double> &features,
                                 noise::ChannelKind kind, double p,
                                 const std::vector<int> &scale_factors);

/// Least-squares polynomial extrapolation to x = 0 (exposed for tests).
double extrapolate_to_zero(const std::vector<double> &xs,
                           const std::vector<double> &ys);

/**
 * Noisy model with a frozen DREM layer between the circuit and the head:
 * prediction = head(drem(noisy expectations)). Training moves only circuit
 * and head parameters; the DREM weights are immutable by construction.
 */
struct MitigatedQnn {
    qnn::QnnModel qnn;
    DremLayer drem;
    noise::KrausChannel channel;
};

std::vector<double> mitigated_expectations(const MitigatedQnn &model,
                                           const std::vector<double> &features);
double mitigated_prediction(const MitigatedQnn &model,
                            const std::vector<double> &features);

/// Trainable adapter: parameters are the circuit angles then the head,
/// exactly like the noiseless model; DREM weights are not parameters.
class MitigatedQnnTrainable : public training::Trainable {
  public:
    explicit MitigatedQnnTrainable(MitigatedQnn &model);

    std::size_t num_params() const override;
    std::vector<double> get_params() const override;
    void set_params(const std::vector<double> &params) override;
    double loss_and_gradient(const std::vector<data::FusionSample> &batch,
                             std::vector<double> &grad) override;
    double predict(const data::FusionSample &sample) const override;

  private:
    MitigatedQnn &model_;
};

} // namespace qfusion::mitigation
