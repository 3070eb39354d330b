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

#include "qfusion/encoding.hpp"

#include <cmath>
#include <string>

namespace qfusion::encoding {
namespace {

// Normalized amplitudes of one chunk, zero-padded to `dim`. Throws with
// `what` on a zero-norm chunk.
std::vector<double> normalized_padded(const double *x, std::size_t n,
                                      std::size_t dim,
                                      const std::string &what) {
    double n2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        n2 += x[i] * x[i];
    }
    detail::require(n2 > 0.0, what);
    const double inv = 1.0 / std::sqrt(n2);
    std::vector<double> out(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = x[i] * inv;
    }
    return out;
}

} // namespace

int amplitude_qubits(int n) {
    detail::require(n >= 1, "need at least one feature");
    int bits = 0;
    while ((std::size_t{1} << bits) < static_cast<std::size_t>(n)) {
        ++bits;
    }
    return bits < 1 ? 1 : bits;
}

int num_qubits(const EncoderConfig &config) {
    validate(config);
    if (config.scheme == Scheme::Amplitude) {
        return amplitude_qubits(config.input_dim);
    }
    return config.hae_blocks * config.hae_qubits_per_block;
}

void validate(const EncoderConfig &config) {
    detail::require(config.input_dim >= 1, "need at least one feature");
    if (config.scheme == Scheme::Amplitude) {
        detail::require(amplitude_qubits(config.input_dim) <= kMaxQubits,
                        "feature vector too large to encode");
        return;
    }
    detail::require(config.hae_blocks >= 1, "HAE needs at least one block");
    detail::require(config.hae_qubits_per_block >= 1,
                    "HAE needs at least one qubit per block");
    detail::require(config.hae_blocks * config.hae_qubits_per_block <=
                        kMaxQubits,
                    "HAE qubit count out of range");
    detail::require(config.input_dim % config.hae_blocks == 0,
                    "HAE feature count must divide evenly into blocks");
    const int chunk = config.input_dim / config.hae_blocks;
    detail::require(static_cast<std::size_t>(chunk) <=
                        (std::size_t{1} << config.hae_qubits_per_block),
                    "HAE block exceeds 2^m amplitudes");
}

sim::StateVector amplitude_encode(const std::vector<double> &features) {
    const int qubits = amplitude_qubits(static_cast<int>(features.size()));
    detail::require(qubits <= kMaxQubits, "feature vector too large to encode");
    const std::size_t dim = std::size_t{1} << qubits;
    const std::vector<double> normed =
        normalized_padded(features.data(), features.size(), dim,
                          "cannot amplitude-encode an all-zero vector");
    std::vector<cdouble> amps(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        amps[i] = cdouble(normed[i]);
    }
    return sim::StateVector::from_amplitudes(std::move(amps));
}

sim::StateVector hae_encode(const std::vector<double> &features,
                            const EncoderConfig &config) {
    detail::require(config.scheme == Scheme::HAE,
                    "hae_encode requires an HAE config");
    validate(config);
    detail::require(static_cast<int>(features.size()) == config.input_dim,
                    "feature vector length mismatch");
    const int b = config.hae_blocks;
    const int m = config.hae_qubits_per_block;
    const std::size_t block_dim = std::size_t{1} << m;
    const std::size_t chunk = features.size() / static_cast<std::size_t>(b);

    std::vector<std::vector<double>> blocks;
    blocks.reserve(static_cast<std::size_t>(b));
    for (int j = 0; j < b; ++j) {
        blocks.push_back(normalized_padded(
            features.data() + static_cast<std::size_t>(j) * chunk, chunk,
            block_dim,
            "HAE block " + std::to_string(j) + " is all zero"));
    }

    // Product state written directly: the amplitude at a basis index is the
    // product of per-block amplitudes at that index's block sub-fields.
    const std::size_t dim = std::size_t{1} << (b * m);
    std::vector<cdouble> amps(dim);
    const std::size_t mask = block_dim - 1;
    for (std::size_t idx = 0; idx < dim; ++idx) {
        double v = 1.0;
        for (int j = 0; j < b; ++j) {
            v *= blocks[static_cast<std::size_t>(j)]
                       [(idx >> (static_cast<std::size_t>(j) * m)) & mask];
        }
        amps[idx] = cdouble(v);
    }
    return sim::StateVector::from_amplitudes(std::move(amps));
}

sim::StateVector encode(const std::vector<double> &features,
                        const EncoderConfig &config) {
    if (config.scheme == Scheme::Amplitude) {
        detail::require(static_cast<int>(features.size()) == config.input_dim,
                        "feature vector length mismatch");
        return amplitude_encode(features);
    }
    return hae_encode(features, config);
}

} // namespace qfusion::encoding
