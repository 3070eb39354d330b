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
 * @file circuit.hpp
 * Circuit intermediate representation: symbolic gate lists with parameter
 * slots, the six ansatz builders, global folding, parameter binding, and
 * execution on either simulation substrate.
 *
 * A GateSpec never stores angles. Parameters live in an external vector and
 * gates reference them by slot index, so one Circuit serves every parameter
 * assignment, every folded copy, and every shifted evaluation the gradient
 * rule needs.
 */

#pragma once

#include <array>
#include <string>
#include <vector>

#include "qfusion/sim.hpp"

namespace qfusion::circuit {

enum class GateKind { H, X, RX, RY, RZ, Rot3, CNOT, CZ, CRX, CRZ };

/// Number of parameter slots the kind consumes (0, 1 or 3).
int gate_param_count(GateKind kind);
/// 1 or 2.
int gate_arity(GateKind kind);
const char *gate_name(GateKind kind);

/**
 * One gate occurrence. `inverted` marks a gate that executes as the inverse
 * of its nominal matrix; folding emits these. Rotations invert by angle
 * negation, Rot3 additionally reverses its angle order (the inverse of
 * RZ(w)RY(t)RZ(p) is RZ(-p)RY(-t)RZ(-w)), and the fixed gates are their own
 * inverses.
 */
struct GateSpec {
    GateKind kind = GateKind::H;
    std::array<int, 2> targets{-1, -1};
    std::array<int, 3> param_slots{-1, -1, -1};
    bool inverted = false;
};

class Circuit {
  public:
    Circuit(int num_qubits, int num_params);

    int num_qubits() const { return num_qubits_; }
    int num_params() const { return num_params_; }
    const std::vector<GateSpec> &gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    Circuit &h(int qubit);
    Circuit &x(int qubit);
    Circuit &rx(int qubit, int slot);
    Circuit &ry(int qubit, int slot);
    Circuit &rz(int qubit, int slot);
    Circuit &rot3(int qubit, int slot_phi, int slot_theta, int slot_omega);
    Circuit &cnot(int control, int target);
    Circuit &cz(int control, int target);
    Circuit &crx(int control, int target, int slot);
    Circuit &crz(int control, int target, int slot);

    /// Appends a fully specified gate (used by folding).
    Circuit &append(const GateSpec &gate);

    /// Checks that every slot in [0, num_params) is referenced.
    void validate() const;

  private:
    int num_qubits_ = 0;
    int num_params_ = 0;
    std::vector<GateSpec> gates_;
};

/**
 * Builds ansatz `id` in 1..6 on `num_qubits` >= 2 qubits with `layers` in
 * [1, 14] repetitions of the single-layer layout. Per-layer parameter counts
 * on n qubits are {3n, n, n, 4n, 4n, 4n + n(n-1)} for ids 1..6.
 */
Circuit build_ansatz(int id, int num_qubits, int layers);

/**
 * Global folding U (U^dag U)^((s-1)/2) for odd scale_factor >= 1. The result
 * has exactly scale_factor times the gate count and the same parameter
 * vector; noiselessly it computes the same unitary.
 */
Circuit fold_global(const Circuit &c, int scale_factor);

/// Additive offset on one concrete gate angle, applied after inversion
/// signs; gate_index -1 means no shift.
struct AngleShift {
    int gate_index = -1;
    int position = 0;
    double delta = 0.0;
};

/// A gate resolved to a concrete matrix.
struct BoundGate {
    int arity = 1;
    sim::GateMatrix1 m1{};
    sim::GateMatrix2 m2{};
    std::array<int, 2> targets{-1, -1};
};

struct BoundCircuit {
    int num_qubits = 0;
    std::vector<BoundGate> gates;
};

BoundCircuit bind_params(const Circuit &c, const std::vector<double> &params);
BoundCircuit bind_params(const Circuit &c, const std::vector<double> &params,
                         const AngleShift &shift);

/// Binds only the gate at `gate_index`. Gradient fast path: patch one gate
/// of an already-bound circuit instead of rebinding all of it.
BoundGate bind_gate_at(const Circuit &c, const std::vector<double> &params,
                       int gate_index, const AngleShift &shift);

/// Applies the bound gates in order. Records one circuit execution and
/// size() gate applications in telemetry.
void execute(const BoundCircuit &c, sim::StateVector &psi);
void execute(const BoundCircuit &c, sim::DensityMatrix &rho);

/// Gradient rule applicable to one concrete angle.
enum class ShiftRule {
    TwoTerm,  // d/dt f = (f(t + pi/2) - f(t - pi/2)) / 2
    FourTerm, // controlled rotations, two shift magnitudes
};

/**
 * One concrete angle position that depends on a parameter slot. The chain
 * rule sums, over occurrences of a slot, sign * (shift-rule derivative of
 * the concrete angle); sign is -1 for inverted occurrences.
 */
struct ParamOccurrence {
    int gate_index = 0;
    int position = 0;
    int slot = 0;
    double sign = 1.0;
    ShiftRule rule = ShiftRule::TwoTerm;
};

std::vector<ParamOccurrence> parameter_occurrences(const Circuit &c);

/// One gate per line: name, targets, slot indices, trailing "inv" marker
/// for inverted occurrences; preceded by a header line with counts.
std::string to_text(const Circuit &c);

} // namespace qfusion::circuit
