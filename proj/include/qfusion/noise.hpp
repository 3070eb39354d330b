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
 * @file noise.hpp
 * Single-qubit Kraus noise channels and noisy circuit execution.
 *
 * Noisy execution applies the channel after every gate, once per qubit the
 * gate acts on. Channels on distinct qubits commute, so the per-qubit order
 * does not matter. Evolution is exact (density matrix), not trajectory
 * sampled.
 */

#pragma once

#include <string>
#include <vector>

#include "qfusion/circuit.hpp"
#include "qfusion/sim.hpp"

namespace qfusion::noise {

enum class ChannelKind { AmplitudeDamping, PhaseDamping, Depolarizing };

const char *channel_name(ChannelKind kind);

/// Parses "amplitude-damping", "phase-damping" or "depolarizing".
ChannelKind channel_from_name(const std::string &name);

struct KrausChannel {
    ChannelKind kind = ChannelKind::Depolarizing;
    double p = 0.0;
    std::vector<sim::GateMatrix1> operators;
};

/**
 * Builds the channel for error probability p in [0, 1].
 *  - AmplitudeDamping: K0 = diag(1, sqrt(1-p)), K1 = [[0, sqrt(p)], [0, 0]].
 *  - PhaseDamping:     K0 = diag(1, sqrt(1-p)), K1 = diag(0, sqrt(p)).
 *  - Depolarizing: sqrt(1-p) I plus sqrt(p/3) X, Y, Z; the total error
 *    probability p splits equally over the three Paulis.
 */
KrausChannel make_channel(ChannelKind kind, double p);

/// rho <- sum_k K_k rho K_k^dagger on `qubit`.
void apply_channel(sim::DensityMatrix &rho, const KrausChannel &channel,
                   int qubit);

/// Runs the circuit on `input`, inserting `channel` after each gate on every
/// qubit that gate acts on. Records telemetry like circuit::execute.
sim::DensityMatrix noisy_execute(const circuit::BoundCircuit &c,
                                 sim::DensityMatrix input,
                                 const KrausChannel &channel);

sim::DensityMatrix noisy_execute(const circuit::BoundCircuit &c,
                                 sim::DensityMatrix input, ChannelKind kind,
                                 double p);

} // namespace qfusion::noise
