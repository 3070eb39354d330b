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
 * @file qnn.hpp
 * The quantum regression model: encoder -> parameterized circuit ->
 * per-qubit <Z> -> single ReLU readout layer.
 *
 * The noiseless path runs on statevectors; the noisy path promotes the
 * encoded state to a density matrix and applies a Kraus channel after each
 * circuit gate. Encoding is ideal state preparation and is never noisy.
 * Circuit-parameter gradients use the parameter-shift rule per gate-angle
 * occurrence: two evaluations for plain rotations, four for controlled
 * rotations.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfusion/circuit.hpp"
#include "qfusion/dataio.hpp"
#include "qfusion/encoding.hpp"
#include "qfusion/nn.hpp"
#include "qfusion/noise.hpp"

namespace qfusion::qnn {

struct QnnModel {
    encoding::EncoderConfig encoder;
    int ansatz_id = 1;
    int layers = 10;
    circuit::Circuit pqc{1, 0};
    std::vector<double> theta;
    nn::DenseNet head; // k -> 1, ReLU output

    int num_qubits() const { return pqc.num_qubits(); }
    std::size_t num_circuit_params() const { return theta.size(); }
    /// Circuit parameters plus head parameters.
    std::size_t num_params() const {
        return theta.size() + head.num_params();
    }
};

/// Builds the model for the encoder's qubit count; theta is drawn uniformly
/// from [0, 2 pi) and the head from the dense-layer init, both seeded.
QnnModel make_qnn(const encoding::EncoderConfig &encoder, int ansatz_id,
                  int layers, std::uint64_t seed);

struct QnnOutput {
    std::vector<double> expectations;
    double prediction = 0.0;
};

/// Per-qubit <Z> of the noiseless circuit on the encoded features.
std::vector<double> noiseless_expectations(const QnnModel &model,
                                           const std::vector<double> &features);

/// Same but under `channel` after every circuit gate (density matrix path).
std::vector<double> noisy_expectations(const QnnModel &model,
                                       const std::vector<double> &features,
                                       const noise::KrausChannel &channel);

/// Readout head applied to an expectation vector.
double head_prediction(const QnnModel &model, const std::vector<double> &z);

QnnOutput forward(const QnnModel &model, const std::vector<double> &features);
QnnOutput forward_noisy(const QnnModel &model,
                        const std::vector<double> &features,
                        noise::ChannelKind kind, double p);

struct QnnGradient {
    std::vector<double> theta;
    std::vector<double> head;
    double loss = 0.0;
};

/**
 * Mean-squared-error batch gradient. Circuit gradients use parameter
 * shifts on the statevector path; the head gradient is reverse-mode. The
 * per-sample map runs in parallel, with a serial reduction in sample order
 * so results do not depend on the thread count.
 */
QnnGradient gradient(const QnnModel &model,
                     const std::vector<data::FusionSample> &batch);

/**
 * dz/d(angle) combination weights of the shift rule: evaluate the
 * expectation vector at angle + delta for each term and sum with the
 * paired coefficient.
 */
std::vector<std::pair<double, double>> shift_terms(circuit::ShiftRule rule);

void to_json(nlohmann::json &j, const QnnModel &model);
void from_json(const nlohmann::json &j, QnnModel &model);

/// Checkpoint: encoder config, ansatz id, layer count, theta, head, seed.
void save_checkpoint(const QnnModel &model, std::uint64_t seed,
                     const std::string &path);
std::pair<QnnModel, std::uint64_t> load_checkpoint(const std::string &path);

} // namespace qfusion::qnn
