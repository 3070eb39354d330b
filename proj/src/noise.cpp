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

#include "qfusion/noise.hpp"

#include <cmath>
#include <utility>

#include "qfusion/gates.hpp"
#include "qfusion/telemetry.hpp"

namespace qfusion::noise {

const char *channel_name(ChannelKind kind) {
    switch (kind) {
    case ChannelKind::AmplitudeDamping:
        return "amplitude-damping";
    case ChannelKind::PhaseDamping:
        return "phase-damping";
    case ChannelKind::Depolarizing:
        return "depolarizing";
    }
    return "?";
}

ChannelKind channel_from_name(const std::string &name) {
    if (name == "amplitude-damping") {
        return ChannelKind::AmplitudeDamping;
    }
    if (name == "phase-damping") {
        return ChannelKind::PhaseDamping;
    }
    if (name == "depolarizing") {
        return ChannelKind::Depolarizing;
    }
    throw std::invalid_argument(
        "unknown noise channel '" + name +
        "' (expected amplitude-damping, phase-damping or depolarizing)");
}

KrausChannel make_channel(ChannelKind kind, double p) {
    detail::require(p >= 0.0 && p <= 1.0,
                    "error probability must be in [0, 1]");
    KrausChannel ch;
    ch.kind = kind;
    ch.p = p;
    switch (kind) {
    case ChannelKind::AmplitudeDamping:
        ch.operators = {
            {cdouble(1), cdouble(0), cdouble(0), cdouble(std::sqrt(1.0 - p))},
            {cdouble(0), cdouble(std::sqrt(p)), cdouble(0), cdouble(0)},
        };
        break;
    case ChannelKind::PhaseDamping:
        ch.operators = {
            {cdouble(1), cdouble(0), cdouble(0), cdouble(std::sqrt(1.0 - p))},
            {cdouble(0), cdouble(0), cdouble(0), cdouble(std::sqrt(p))},
        };
        break;
    case ChannelKind::Depolarizing: {
        const double keep = std::sqrt(1.0 - p);
        const double flip = std::sqrt(p / 3.0);
        auto scaled = [](const sim::GateMatrix1 &m, double s) {
            return sim::GateMatrix1{m[0] * s, m[1] * s, m[2] * s, m[3] * s};
        };
        ch.operators = {
            {cdouble(keep), cdouble(0), cdouble(0), cdouble(keep)},
            scaled(gates::x(), flip),
            scaled(gates::y(), flip),
            scaled(gates::z(), flip),
        };
        break;
    }
    }
    return ch;
}

void apply_channel(sim::DensityMatrix &rho, const KrausChannel &channel,
                   int qubit) {
    sim::apply_kraus(rho, channel.operators, qubit);
}

sim::DensityMatrix noisy_execute(const circuit::BoundCircuit &c,
                                 sim::DensityMatrix input,
                                 const KrausChannel &channel) {
    detail::require(input.num_qubits() == c.num_qubits,
                    "circuit qubit count mismatch");
    sim::DensityMatrix rho = std::move(input);
    for (const circuit::BoundGate &g : c.gates) {
        if (g.arity == 1) {
            sim::apply_gate(rho, g.m1, g.targets[0]);
            apply_channel(rho, channel, g.targets[0]);
        } else {
            sim::apply_gate(rho, g.m2, g.targets[0], g.targets[1]);
            apply_channel(rho, channel, g.targets[0]);
            apply_channel(rho, channel, g.targets[1]);
        }
    }
    telemetry::record_execution(c.gates.size());
    return rho;
}

sim::DensityMatrix noisy_execute(const circuit::BoundCircuit &c,
                                 sim::DensityMatrix input, ChannelKind kind,
                                 double p) {
    return noisy_execute(c, std::move(input), make_channel(kind, p));
}

} // namespace qfusion::noise
