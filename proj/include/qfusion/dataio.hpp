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
 * @file dataio.hpp
 * Fusion-vector dataset types, file I/O, synthetic data generation, and
 * train/validation splitting.
 *
 * Dataset file format: line-oriented text, one record per line,
 * whitespace-separated fields in the order
 *
 *     id feature_0 ... feature_15 affinity
 *
 * Lines starting with '#' and blank lines are skipped. The same format
 * accepts externally produced network activations, so real fusion vectors
 * can replace the synthetic generator without code changes.
 */

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qfusion::data {

inline constexpr int kFusionFeatures = 16;

struct FusionSample {
    std::string id;
    std::vector<double> features; // exactly kFusionFeatures entries
    double affinity = 0.0;
};

using Dataset = std::vector<FusionSample>;

Dataset load_dataset(const std::string &path);
void save_dataset(const Dataset &samples, const std::string &path);

/**
 * Deterministic synthetic fusion-vector dataset. Features are
 * ReLU-censored Gaussians with fixed per-coordinate means and spreads
 * (activation-like marginals); the label is
 *
 *     affinity = synth_target(features) + noise_sigma * N(0, 1)
 *
 * with synth_target a fixed smooth nonlinear function (a quadratic form of
 * the normalized feature vector plus an offset). Same (n, seed,
 * noise_sigma) always yields the same dataset.
 */
Dataset synth_dataset(int n, std::uint64_t seed, double noise_sigma);

/// The generator's noiseless target function.
double synth_target(const std::vector<double> &features);

/// Standard deviation of synth_target under the generator's feature
/// distribution (measured once over a large sample and frozen). Use
/// noise_sigma = kSynthTargetStd / sqrt(19) for a best-possible R^2 of 0.95.
extern const double kSynthTargetStd;

/// Seeded shuffle, then the first round(fraction * n) samples become the
/// validation set. Requires at least 2 samples; both parts are nonempty.
std::pair<Dataset, Dataset> split(const Dataset &samples,
                                  double validation_fraction,
                                  std::uint64_t seed);

} // namespace qfusion::data
