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

// Timing comparison of the strided (OpenMP) gate kernels against the dense
// serial reference path, with a cross-check that both produce the same
// state. The reference path builds full 2^n x 2^n operators, so it only
// runs at small qubit counts; larger sizes time the kernels alone.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <vector>

#include "qfusion/gates.hpp"
#include "qfusion/reference.hpp"
#include "qfusion/rng.hpp"
#include "qfusion/sim.hpp"

namespace {

using qfusion::cdouble;
namespace gates = qfusion::gates;
namespace reference = qfusion::reference;
namespace sim = qfusion::sim;

struct DrawnGate {
    bool two_qubit = false;
    sim::GateMatrix1 m1{};
    sim::GateMatrix2 m2{};
    int target0 = 0;
    int target1 = 0;
};

std::vector<DrawnGate> draw_gates(int num_qubits, int count,
                                  std::uint64_t seed) {
    auto engine = qfusion::rng::make_engine(seed);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    std::uniform_int_distribution<int> qubit(0, num_qubits - 1);
    std::uniform_int_distribution<int> kind(0, 3);

    std::vector<DrawnGate> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        DrawnGate g;
        g.target0 = qubit(engine);
        switch (kind(engine)) {
        case 0:
            g.m1 = gates::rx(angle(engine));
            break;
        case 1:
            g.m1 = gates::ry(angle(engine));
            break;
        case 2:
            g.m1 = gates::rz(angle(engine));
            break;
        default:
            g.two_qubit = true;
            g.m2 = gates::cnot();
            do {
                g.target1 = qubit(engine);
            } while (g.target1 == g.target0);
            break;
        }
        out.push_back(g);
    }
    return out;
}

double run_kernels(sim::StateVector &psi, const std::vector<DrawnGate> &gs) {
    const auto start = std::chrono::steady_clock::now();
    for (const DrawnGate &g : gs) {
        if (g.two_qubit) {
            sim::apply_gate(psi, g.m2, g.target0, g.target1);
        } else {
            sim::apply_gate(psi, g.m1, g.target0);
        }
    }
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
}

double run_reference(std::vector<cdouble> &vec, int num_qubits,
                     const std::vector<DrawnGate> &gs) {
    const auto start = std::chrono::steady_clock::now();
    for (const DrawnGate &g : gs) {
        const reference::Dense op =
            g.two_qubit
                ? reference::embed(g.m2, g.target0, g.target1, num_qubits)
                : reference::embed(g.m1, g.target0, num_qubits);
        vec = reference::apply(op, vec);
    }
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
}

} // namespace

int main() {
    constexpr int kGates = 200;
    constexpr int kReferenceMaxQubits = 8;

    std::printf("%-7s %-7s %12s %14s %10s %12s\n", "qubits", "gates",
                "kernel_ms", "reference_ms", "speedup", "max_delta");

    for (const int n : {4, 6, 8, 10, 12}) {
        const std::vector<DrawnGate> gs =
            draw_gates(n, kGates, 0x9e3779b97f4a7c15ULL + n);

        sim::StateVector psi(n);
        const double kernel_ms = run_kernels(psi, gs);

        if (n <= kReferenceMaxQubits) {
            std::vector<cdouble> vec(std::size_t{1} << n);
            vec[0] = 1.0;
            const double reference_ms = run_reference(vec, n, gs);
            double max_delta = 0.0;
            for (std::size_t i = 0; i < vec.size(); ++i) {
                max_delta = std::max(max_delta, std::abs(vec[i] - psi[i]));
            }
            std::printf("%-7d %-7d %12.3f %14.3f %9.1fx %12.3e\n", n, kGates,
                        kernel_ms, reference_ms, reference_ms / kernel_ms,
                        max_delta);
            if (max_delta > 1e-10) {
                std::printf("kernel/reference mismatch at %d qubits\n", n);
                return 1;
            }
        } else {
            std::printf("%-7d %-7d %12.3f %14s %10s %12s\n", n, kGates,
                        kernel_ms, "-", "-", "-");
        }
    }
    return 0;
}
