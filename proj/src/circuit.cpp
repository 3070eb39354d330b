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

#include "qfusion/circuit.hpp"

#include <sstream>

#include "qfusion/gates.hpp"
#include "qfusion/telemetry.hpp"

namespace qfusion::circuit {
namespace {

void check_qubit(int q, int num_qubits) {
    detail::require_index(q >= 0 && q < num_qubits,
                          "gate target out of range");
}

void check_slot(int slot, int num_params) {
    detail::require_index(slot >= 0 && slot < num_params,
                          "parameter slot out of range");
}

// Concrete angles of a gate occurrence given the parameter vector, the
// inversion flag, and an optional additive shift on one angle position.
std::array<double, 3> resolve_angles(const GateSpec &g,
                                     const std::vector<double> &params,
                                     int gate_index, const AngleShift &shift) {
    const int count = gate_param_count(g.kind);
    std::array<double, 3> a{0.0, 0.0, 0.0};
    for (int j = 0; j < count; ++j) {
        if (!g.inverted) {
            a[j] = params[static_cast<std::size_t>(g.param_slots[j])];
        } else if (g.kind == GateKind::Rot3) {
            a[j] = -params[static_cast<std::size_t>(g.param_slots[2 - j])];
        } else {
            a[j] = -params[static_cast<std::size_t>(g.param_slots[j])];
        }
    }
    if (shift.gate_index == gate_index) {
        detail::require(shift.position >= 0 && shift.position < count,
                        "angle shift position out of range");
        a[shift.position] += shift.delta;
    }
    return a;
}

BoundGate bind_gate(const GateSpec &g, const std::array<double, 3> &a) {
    BoundGate b;
    b.arity = gate_arity(g.kind);
    b.targets = g.targets;
    switch (g.kind) {
    case GateKind::H:
        b.m1 = gates::h();
        break;
    case GateKind::X:
        b.m1 = gates::x();
        break;
    case GateKind::RX:
        b.m1 = gates::rx(a[0]);
        break;
    case GateKind::RY:
        b.m1 = gates::ry(a[0]);
        break;
    case GateKind::RZ:
        b.m1 = gates::rz(a[0]);
        break;
    case GateKind::Rot3:
        b.m1 = gates::rot3(a[0], a[1], a[2]);
        break;
    case GateKind::CNOT:
        b.m2 = gates::cnot();
        break;
    case GateKind::CZ:
        b.m2 = gates::cz();
        break;
    case GateKind::CRX:
        b.m2 = gates::crx(a[0]);
        break;
    case GateKind::CRZ:
        b.m2 = gates::crz(a[0]);
        break;
    }
    return b;
}

} // namespace

int gate_param_count(GateKind kind) {
    switch (kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::CZ:
        return 0;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::CRX:
    case GateKind::CRZ:
        return 1;
    case GateKind::Rot3:
        return 3;
    }
    return 0;
}

int gate_arity(GateKind kind) {
    switch (kind) {
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::CRX:
    case GateKind::CRZ:
        return 2;
    default:
        return 1;
    }
}

const char *gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::H:
        return "H";
    case GateKind::X:
        return "X";
    case GateKind::RX:
        return "RX";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::Rot3:
        return "ROT3";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::CZ:
        return "CZ";
    case GateKind::CRX:
        return "CRX";
    case GateKind::CRZ:
        return "CRZ";
    }
    return "?";
}

Circuit::Circuit(int num_qubits, int num_params)
    : num_qubits_(num_qubits), num_params_(num_params) {
    detail::require(num_qubits >= 1 && num_qubits <= kMaxQubits,
                    "qubit count out of range");
    detail::require(num_params >= 0, "negative parameter count");
}

Circuit &Circuit::h(int qubit) {
    check_qubit(qubit, num_qubits_);
    gates_.push_back({GateKind::H, {qubit, -1}, {-1, -1, -1}, false});
    return *this;
}

Circuit &Circuit::x(int qubit) {
    check_qubit(qubit, num_qubits_);
    gates_.push_back({GateKind::X, {qubit, -1}, {-1, -1, -1}, false});
    return *this;
}

Circuit &Circuit::rx(int qubit, int slot) {
    check_qubit(qubit, num_qubits_);
    check_slot(slot, num_params_);
    gates_.push_back({GateKind::RX, {qubit, -1}, {slot, -1, -1}, false});
    return *this;
}

Circuit &Circuit::ry(int qubit, int slot) {
    check_qubit(qubit, num_qubits_);
    check_slot(slot, num_params_);
    gates_.push_back({GateKind::RY, {qubit, -1}, {slot, -1, -1}, false});
    return *this;
}

Circuit &Circuit::rz(int qubit, int slot) {
    check_qubit(qubit, num_qubits_);
    check_slot(slot, num_params_);
    gates_.push_back({GateKind::RZ, {qubit, -1}, {slot, -1, -1}, false});
    return *this;
}

Circuit &Circuit::rot3(int qubit, int slot_phi, int slot_theta,
                       int slot_omega) {
    check_qubit(qubit, num_qubits_);
    check_slot(slot_phi, num_params_);
    check_slot(slot_theta, num_params_);
    check_slot(slot_omega, num_params_);
    gates_.push_back({GateKind::Rot3,
                      {qubit, -1},
                      {slot_phi, slot_theta, slot_omega},
                      false});
    return *this;
}

Circuit &Circuit::cnot(int control, int target) {
    check_qubit(control, num_qubits_);
    check_qubit(target, num_qubits_);
    detail::require(control != target, "control equals target");
    gates_.push_back({GateKind::CNOT, {control, target}, {-1, -1, -1}, false});
    return *this;
}

Circuit &Circuit::cz(int control, int target) {
    check_qubit(control, num_qubits_);
    check_qubit(target, num_qubits_);
    detail::require(control != target, "control equals target");
    gates_.push_back({GateKind::CZ, {control, target}, {-1, -1, -1}, false});
    return *this;
}

Circuit &Circuit::crx(int control, int target, int slot) {
    check_qubit(control, num_qubits_);
    check_qubit(target, num_qubits_);
    detail::require(control != target, "control equals target");
    check_slot(slot, num_params_);
    gates_.push_back({GateKind::CRX, {control, target}, {slot, -1, -1}, false});
    return *this;
}

Circuit &Circuit::crz(int control, int target, int slot) {
    check_qubit(control, num_qubits_);
    check_qubit(target, num_qubits_);
    detail::require(control != target, "control equals target");
    check_slot(slot, num_params_);
    gates_.push_back({GateKind::CRZ, {control, target}, {slot, -1, -1}, false});
    return *this;
}

Circuit &Circuit::append(const GateSpec &gate) {
    const int arity = gate_arity(gate.kind);
    check_qubit(gate.targets[0], num_qubits_);
    if (arity == 2) {
        check_qubit(gate.targets[1], num_qubits_);
        detail::require(gate.targets[0] != gate.targets[1],
                        "control equals target");
    }
    for (int j = 0; j < gate_param_count(gate.kind); ++j) {
        check_slot(gate.param_slots[j], num_params_);
    }
    gates_.push_back(gate);
    return *this;
}

void Circuit::validate() const {
    std::vector<bool> used(static_cast<std::size_t>(num_params_), false);
    for (const GateSpec &g : gates_) {
        for (int j = 0; j < gate_param_count(g.kind); ++j) {
            used[static_cast<std::size_t>(g.param_slots[j])] = true;
        }
    }
    for (std::size_t s = 0; s < used.size(); ++s) {
        detail::require(used[s], "parameter slot " + std::to_string(s) +
                                     " is never referenced");
    }
}

Circuit build_ansatz(int id, int num_qubits, int layers) {
    detail::require(id >= 1 && id <= 6,
                    "ansatz id must be in 1..6, got " + std::to_string(id));
    detail::require(num_qubits >= 2 && num_qubits <= kMaxQubits,
                    "ansatz needs 2.." + std::to_string(kMaxQubits) +
                        " qubits");
    detail::require(layers >= 1 && layers <= 14, "layers must be in 1..14");

    const int n = num_qubits;
    int per_layer = 0;
    switch (id) {
    case 1:
        per_layer = 3 * n;
        break;
    case 2:
    case 3:
        per_layer = n;
        break;
    case 4:
    case 5:
        per_layer = 4 * n;
        break;
    case 6:
        per_layer = 4 * n + n * (n - 1);
        break;
    }

    Circuit c(n, layers * per_layer);
    int slot = 0;
    for (int layer = 0; layer < layers; ++layer) {
        switch (id) {
        case 1: {
            // General rotation on every qubit, then a cyclic CNOT shell
            // whose range walks through 1..n-1 as layers stack, covering
            // all-to-all connectivity across depth.
            for (int q = 0; q < n; ++q) {
                c.rot3(q, slot, slot + 1, slot + 2);
                slot += 3;
            }
            const int range = (layer % (n - 1)) + 1;
            for (int q = 0; q < n; ++q) {
                c.cnot(q, (q + range) % n);
            }
            break;
        }
        case 2: {
            for (int q = 0; q < n; ++q) {
                c.h(q);
            }
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    c.cz(i, j);
                }
            }
            for (int q = 0; q < n; ++q) {
                c.rx(q, slot++);
            }
            break;
        }
        case 3: {
            for (int q = 0; q < n; ++q) {
                c.ry(q, slot++);
            }
            for (int q = 0; q + 1 < n; ++q) {
                c.cnot(q, q + 1);
            }
            break;
        }
        case 4:
        case 5: {
            // Two rotation shells interleaved with two controlled-rotation
            // rings wound in opposite directions.
            for (int q = 0; q < n; ++q) {
                c.ry(q, slot++);
            }
            for (int q = 0; q < n; ++q) {
                if (id == 4) {
                    c.crx(q, (q + 1) % n, slot++);
                } else {
                    c.crz(q, (q + 1) % n, slot++);
                }
            }
            for (int q = 0; q < n; ++q) {
                c.ry(q, slot++);
            }
            for (int q = 0; q < n; ++q) {
                if (id == 4) {
                    c.crx(q, (q + n - 1) % n, slot++);
                } else {
                    c.crz(q, (q + n - 1) % n, slot++);
                }
            }
            break;
        }
        case 6: {
            for (int q = 0; q < n; ++q) {
                c.rx(q, slot++);
            }
            for (int q = 0; q < n; ++q) {
                c.rz(q, slot++);
            }
            for (int control = 0; control < n; ++control) {
                for (int target = 0; target < n; ++target) {
                    if (target != control) {
                        c.crx(control, target, slot++);
                    }
                }
            }
            for (int q = 0; q < n; ++q) {
                c.rx(q, slot++);
            }
            for (int q = 0; q < n; ++q) {
                c.rz(q, slot++);
            }
            break;
        }
        }
    }
    c.validate();
    return c;
}

Circuit fold_global(const Circuit &c, int scale_factor) {
    detail::require(scale_factor >= 1 && scale_factor % 2 == 1,
                    "scale factor must be a positive odd integer");
    Circuit folded(c.num_qubits(), c.num_params());
    for (const GateSpec &g : c.gates()) {
        folded.append(g);
    }
    const int repeats = (scale_factor - 1) / 2;
    for (int r = 0; r < repeats; ++r) {
        for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
            GateSpec inv = *it;
            inv.inverted = !inv.inverted;
            folded.append(inv);
        }
        for (const GateSpec &g : c.gates()) {
            folded.append(g);
        }
    }
    return folded;
}

BoundCircuit bind_params(const Circuit &c, const std::vector<double> &params) {
    return bind_params(c, params, AngleShift{});
}

BoundCircuit bind_params(const Circuit &c, const std::vector<double> &params,
                         const AngleShift &shift) {
    detail::require(static_cast<int>(params.size()) == c.num_params(),
                    "parameter vector length mismatch");
    detail::require(shift.gate_index == -1 ||
                        (shift.gate_index >= 0 &&
                         shift.gate_index < static_cast<int>(c.size())),
                    "angle shift gate index out of range");
    BoundCircuit bound;
    bound.num_qubits = c.num_qubits();
    bound.gates.reserve(c.size());
    int index = 0;
    for (const GateSpec &g : c.gates()) {
        bound.gates.push_back(
            bind_gate(g, resolve_angles(g, params, index, shift)));
        ++index;
    }
    return bound;
}

BoundGate bind_gate_at(const Circuit &c, const std::vector<double> &params,
                       int gate_index, const AngleShift &shift) {
    detail::require(static_cast<int>(params.size()) == c.num_params(),
                    "parameter vector length mismatch");
    detail::require_index(gate_index >= 0 &&
                              gate_index < static_cast<int>(c.size()),
                          "gate index out of range");
    const GateSpec &g = c.gates()[static_cast<std::size_t>(gate_index)];
    return bind_gate(g, resolve_angles(g, params, gate_index, shift));
}

void execute(const BoundCircuit &c, sim::StateVector &psi) {
    detail::require(psi.num_qubits() == c.num_qubits,
                    "circuit qubit count mismatch");
    for (const BoundGate &g : c.gates) {
        if (g.arity == 1) {
            sim::apply_gate(psi, g.m1, g.targets[0]);
        } else {
            sim::apply_gate(psi, g.m2, g.targets[0], g.targets[1]);
        }
    }
    telemetry::record_execution(c.gates.size());
}

void execute(const BoundCircuit &c, sim::DensityMatrix &rho) {
    detail::require(rho.num_qubits() == c.num_qubits,
                    "circuit qubit count mismatch");
    for (const BoundGate &g : c.gates) {
        if (g.arity == 1) {
            sim::apply_gate(rho, g.m1, g.targets[0]);
        } else {
            sim::apply_gate(rho, g.m2, g.targets[0], g.targets[1]);
        }
    }
    telemetry::record_execution(c.gates.size());
}

std::vector<ParamOccurrence> parameter_occurrences(const Circuit &c) {
    std::vector<ParamOccurrence> out;
    int index = 0;
    for (const GateSpec &g : c.gates()) {
        const int count = gate_param_count(g.kind);
        const bool controlled =
            g.kind == GateKind::CRX || g.kind == GateKind::CRZ;
        for (int j = 0; j < count; ++j) {
            ParamOccurrence occ;
            occ.gate_index = index;
            occ.position = j;
            if (!g.inverted) {
                occ.slot = g.param_slots[j];
                occ.sign = 1.0;
            } else if (g.kind == GateKind::Rot3) {
                occ.slot = g.param_slots[2 - j];
                occ.sign = -1.0;
            } else {
                occ.slot = g.param_slots[j];
                occ.sign = -1.0;
            }
            occ.rule = controlled ? ShiftRule::FourTerm : ShiftRule::TwoTerm;
            out.push_back(occ);
        }
        ++index;
    }
    return out;
}

std::string to_text(const Circuit &c) {
    std::ostringstream os;
    os << "circuit qubits=" << c.num_qubits() << " params=" << c.num_params()
       << " gates=" << c.size() << "\n";
    for (const GateSpec &g : c.gates()) {
        os << gate_name(g.kind);
        for (int t = 0; t < gate_arity(g.kind); ++t) {
            os << ' ' << g.targets[t];
        }
        for (int j = 0; j < gate_param_count(g.kind); ++j) {
            os << " $" << g.param_slots[j];
        }
        if (g.inverted) {
            os << " inv";
        }
        os << "\n";
    }
    return os.str();
}

} // namespace qfusion::circuit
