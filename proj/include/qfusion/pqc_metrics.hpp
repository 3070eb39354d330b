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
 * @file pqc_metrics.hpp
 * Circuit quality metrics: expressibility (KL divergence of the sampled
 * state-fidelity distribution against the Haar distribution) and entangling
 * capacity (mean Meyer-Wallach Q under random parameters).
 *
 * Parameters are drawn uniformly from [0, 2 pi), one counter-based
 * substream per sample, so every report is deterministic in (seed, sample
 * count) regardless of thread count.
 */

#pragma once

#include <cstdint>

#include "qfusion/circuit.hpp"
#include "qfusion/sim.hpp"

namespace qfusion::pqc {

struct ExpressibilityReport {
    double kl_divergence = 0.0;
    int num_samples = 0; // fidelity pairs
    int num_bins = 0;
    std::uint64_t seed = 0;
    /// Circuit has no trainable angles: every fidelity is 1 and the KL
    /// estimate diverges as bins shrink. kl_divergence is +infinity.
    bool untrainable = false;
};

/**
 * Samples `num_samples` pairs of parameter vectors, histograms the pair
 * fidelities |<psi(theta)|psi(phi)>|^2 into `num_bins` equal bins on [0, 1]
 * and returns KL(sampled || Haar), where the Haar fidelity density on
 * N-dimensional states is P(F) = (N-1)(1-F)^(N-2).
 */
ExpressibilityReport expressibility(const circuit::Circuit &c,
                                    int num_samples, int num_bins,
                                    std::uint64_t seed);

struct EntanglingCapacityReport {
    double mean_q = 0.0;
    int num_samples = 0;
    std::uint64_t seed = 0;
};

/// Mean Meyer-Wallach Q over random parameter draws from |0...0>.
EntanglingCapacityReport entangling_capacity(const circuit::Circuit &c,
                                             int num_samples,
                                             std::uint64_t seed);

/// Q(psi) = 2 (1 - (1/n) sum_k Tr(rho_k^2)); 0 for product states, 1 for
/// a Bell pair.
double meyer_wallach_q(const sim::StateVector &psi);

/// Haar-random fidelity mass of the bin [lo, hi) for N = `dim` dimensional
/// states: (1-lo)^(N-1) - (1-hi)^(N-1).
double haar_bin_probability(double lo, double hi, std::int64_t dim);

} // namespace qfusion::pqc
