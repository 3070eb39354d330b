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
 * @file encoding.hpp
 * Classical-to-quantum feature maps.
 *
 * Amplitude encoding writes the normalized feature vector into the leading
 * amplitudes of a ceil(log2 n)-qubit state, padding with zeros. Hybrid
 * amplitude encoding (HAE) splits the features into `blocks` equal
 * contiguous chunks, amplitude-encodes each chunk on its own
 * `qubits_per_block` qubits, and returns the tensor product; block 0
 * occupies the lowest qubits. Both maps are treated as ideal state
 * preparation: no gate decomposition, hence no gate noise on encoding.
 */

#pragma once

#include <vector>

#include "qfusion/sim.hpp"

namespace qfusion::encoding {

enum class Scheme { Amplitude, HAE };

struct EncoderConfig {
    Scheme scheme = Scheme::Amplitude;
    /// Feature vector length n.
    int input_dim = 16;
    /// HAE block count b; features split into b chunks of n/b.
    int hae_blocks = 2;
    /// HAE qubits per block m; each chunk needs n/b <= 2^m.
    int hae_qubits_per_block = 4;
};

/// Qubits needed to amplitude-encode n features: ceil(log2 n), at least 1.
int amplitude_qubits(int n);

/// Qubit count implied by the config (encoder output width).
int num_qubits(const EncoderConfig &config);

/// Throws std::invalid_argument on an inconsistent config.
void validate(const EncoderConfig &config);

/// Throws on an all-zero input (normalization undefined).
sim::StateVector amplitude_encode(const std::vector<double> &features);

/// Throws if any block is all zero or the features exceed capacity.
sim::StateVector hae_encode(const std::vector<double> &features,
                            const EncoderConfig &config);

/// Dispatches on config.scheme.
sim::StateVector encode(const std::vector<double> &features,
                        const EncoderConfig &config);

} // namespace qfusion::encoding
