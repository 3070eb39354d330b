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
 * @file reference.hpp
 * Serial dense-matrix implementation of the simulator semantics.
 *
 * Everything here builds full 2^n x 2^n operators and multiplies them out.
 * It is deliberately slow and deliberately independent of the strided
 * kernels in sim.cpp: tests and the kernel benchmark compare the two paths,
 * so this file must not call into them.
 */

#pragma once

#include <cstddef>
#include <vector>

#include "qfusion/sim.hpp"

namespace qfusion::reference {

/// Dense row-major complex matrix.
struct Dense {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cdouble> a;

    Dense() = default;
    Dense(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    cdouble &at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const cdouble &at(std::size_t r, std::size_t c) const {
        return a[r * cols + c];
    }
};

Dense identity(std::size_t dim);
Dense matmul(const Dense &lhs, const Dense &rhs);
Dense adjoint(const Dense &m);
Dense kron(const Dense &a, const Dense &b);

/// Full 2^n x 2^n operator for a single-qubit gate on `target`.
Dense embed(const sim::GateMatrix1 &m, int target, int num_qubits);

/// Full operator for a two-qubit gate; target0 is the low local bit.
Dense embed(const sim::GateMatrix2 &m, int target0, int target1,
            int num_qubits);

std::vector<cdouble> apply(const Dense &op, const std::vector<cdouble> &vec);

/// rho' = U rho U^dagger with U the embedded full operator.
Dense evolve(const Dense &op, const Dense &rho);

/// rho' = sum_k K_k rho K_k^dagger, each K_k embedded on `target`.
Dense apply_kraus(const std::vector<sim::GateMatrix1> &ops, int target,
                  const Dense &rho);

/// Traces out every qubit not in `keep`; `keep` lists qubit indices in
/// increasing order and indexes the result in the same order (keep[0] is
/// the low bit of the reduced space).
Dense partial_trace(const Dense &rho, int num_qubits,
                    const std::vector<int> &keep);

double expectation_z(const Dense &rho, int num_qubits, int qubit);

} // namespace qfusion::reference
