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
 * @file gates.hpp
 * Concrete gate matrices for the supported gate set.
 *
 * Controlled gates take their targets as (control, target); the control is
 * the low bit of the local index per the sim.hpp convention, so the
 * controlled block acts on local indices 1 and 3.
 */

#pragma once

#include <cmath>

#include "qfusion/sim.hpp"

namespace qfusion::gates {

using sim::GateMatrix1;
using sim::GateMatrix2;

inline GateMatrix1 h() {
    const double s = 1.0 / std::sqrt(2.0);
    return {cdouble(s), cdouble(s), cdouble(s), cdouble(-s)};
}

inline GateMatrix1 x() {
    return {cdouble(0), cdouble(1), cdouble(1), cdouble(0)};
}

inline GateMatrix1 y() {
    return {cdouble(0), cdouble(0, -1), cdouble(0, 1), cdouble(0)};
}

inline GateMatrix1 z() {
    return {cdouble(1), cdouble(0), cdouble(0), cdouble(-1)};
}

inline GateMatrix1 rx(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {cdouble(c), cdouble(0, -s), cdouble(0, -s), cdouble(c)};
}

inline GateMatrix1 ry(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {cdouble(c), cdouble(-s), cdouble(s), cdouble(c)};
}

inline GateMatrix1 rz(double theta) {
    return {std::polar(1.0, -theta / 2.0), cdouble(0), cdouble(0),
            std::polar(1.0, theta / 2.0)};
}

/// RZ(omega) RY(theta) RZ(phi), the general single-qubit rotation.
inline GateMatrix1 rot3(double phi, double theta, double omega) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {std::polar(c, -(phi + omega) / 2.0),
            -std::polar(s, (phi - omega) / 2.0),
            std::polar(s, -(phi - omega) / 2.0),
            std::polar(c, (phi + omega) / 2.0)};
}

inline GateMatrix2 cnot() {
    GateMatrix2 m{};
    m[0 * 4 + 0] = 1.0;
    m[2 * 4 + 2] = 1.0;
    m[1 * 4 + 3] = 1.0;
    m[3 * 4 + 1] = 1.0;
    return m;
}

inline GateMatrix2 cz() {
    GateMatrix2 m{};
    m[0 * 4 + 0] = 1.0;
    m[1 * 4 + 1] = 1.0;
    m[2 * 4 + 2] = 1.0;
    m[3 * 4 + 3] = -1.0;
    return m;
}

inline GateMatrix2 crx(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    GateMatrix2 m{};
    m[0 * 4 + 0] = 1.0;
    m[2 * 4 + 2] = 1.0;
    m[1 * 4 + 1] = c;
    m[1 * 4 + 3] = cdouble(0, -s);
    m[3 * 4 + 1] = cdouble(0, -s);
    m[3 * 4 + 3] = c;
    return m;
}

inline GateMatrix2 crz(double theta) {
    GateMatrix2 m{};
    m[0 * 4 + 0] = 1.0;
    m[2 * 4 + 2] = 1.0;
    m[1 * 4 + 1] = std::polar(1.0, -theta / 2.0);
    m[3 * 4 + 3] = std::polar(1.0, theta / 2.0);
    return m;
}

inline GateMatrix1 adjoint(const GateMatrix1 &m) {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]),
            std::conj(m[3])};
}

inline GateMatrix2 adjoint(const GateMatrix2 &m) {
    GateMatrix2 out{};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out[r * 4 + c] = std::conj(m[c * 4 + r]);
        }
    }
    return out;
}

} // namespace qfusion::gates
