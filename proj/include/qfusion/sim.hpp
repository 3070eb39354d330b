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
 * @file sim.hpp
 * Statevector and density-matrix simulation kernels.
 *
 * Conventions used throughout:
 *  - Qubit 0 is the least significant bit of a computational basis index.
 *  - Gate matrices are row-major. For two-qubit gates the first target is
 *    the low bit of the 4x4 local index, so local index l satisfies
 *    l = bit(target0) + 2 * bit(target1).
 *  - A density matrix on n qubits is stored row-major as a flat array of
 *    2^n * 2^n entries; entry (r, c) sits at index r * 2^n + c.
 *
 * The in-place kernels here are the production path and parallelize with
 * OpenMP over disjoint index groups. qfusion::reference holds an independent
 * dense-matrix implementation used to cross-check them.
 */

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qfusion/common.hpp"

namespace qfusion::sim {

/// Row-major 2x2 complex matrix.
using GateMatrix1 = std::array<cdouble, 4>;
/// Row-major 4x4 complex matrix.
using GateMatrix2 = std::array<cdouble, 16>;

/// Index-group counts at or above this run the OpenMP path.
inline constexpr std::int64_t kParallelThreshold = 2048;

/// Pure state of `num_qubits` qubits, 2^num_qubits amplitudes.
class StateVector {
  public:
    explicit StateVector(int num_qubits);

    /// Wraps existing amplitudes; the size must be a power of two between
    /// 2 and 2^kMaxQubits. Amplitudes are taken as given (not normalized).
    static StateVector from_amplitudes(std::vector<cdouble> amps);

    int num_qubits() const { return num_qubits_; }
    std::size_t size() const { return amps_.size(); }

    cdouble *data() { return amps_.data(); }
    const cdouble *data() const { return amps_.data(); }
    std::vector<cdouble> &amplitudes() { return amps_; }
    const std::vector<cdouble> &amplitudes() const { return amps_; }

    cdouble &operator[](std::size_t i) { return amps_[i]; }
    const cdouble &operator[](std::size_t i) const { return amps_[i]; }

    /// Resets to |0...0>.
    void reset();

    /// Sum of squared magnitudes.
    double norm_squared() const;

    /// Scales amplitudes to unit norm. Throws if the norm is zero.
    void normalize();

  private:
    StateVector() = default;

    int num_qubits_ = 0;
    std::vector<cdouble> amps_;
};

/// Mixed state of `num_qubits` qubits as a dense Hermitian matrix.
class DensityMatrix {
  public:
    explicit DensityMatrix(int num_qubits);

    static DensityMatrix from_statevector(const StateVector &psi);

    int num_qubits() const { return num_qubits_; }
    /// Row (equivalently column) dimension, 2^num_qubits.
    std::size_t dim() const { return dim_; }

    cdouble &at(std::size_t row, std::size_t col) {
        return elems_[row * dim_ + col];
    }
    const cdouble &at(std::size_t row, std::size_t col) const {
        return elems_[row * dim_ + col];
    }

    std::vector<cdouble> &elements() { return elems_; }
    const std::vector<cdouble> &elements() const { return elems_; }

    /// Resets to |0...0><0...0|.
    void reset();

    double trace_real() const;

    /// Re Tr(rho^2); assumes Hermitian contents.
    double purity() const;

  private:
    int num_qubits_ = 0;
    std::size_t dim_ = 0;
    std::vector<cdouble> elems_;
};

/// psi <- (M on `target`) psi.
void apply_gate(StateVector &psi, const GateMatrix1 &m, int target);

/// psi <- (M on `target0`, `target1`) psi; target0 is the low local bit.
void apply_gate(StateVector &psi, const GateMatrix2 &m, int target0,
                int target1);

/// rho <- M rho M^dagger.
void apply_gate(DensityMatrix &rho, const GateMatrix1 &m, int target);
void apply_gate(DensityMatrix &rho, const GateMatrix2 &m, int target0,
                int target1);

/// rho <- sum_k K_k rho K_k^dagger for single-qubit Kraus operators.
void apply_kraus(DensityMatrix &rho, const std::vector<GateMatrix1> &ops,
                 int target);

/// <Z_qubit> of a normalized state.
double expectation_z(const StateVector &psi, int qubit);
double expectation_z(const DensityMatrix &rho, int qubit);

/// Single-qubit reduced density matrix of `qubit`, row-major 2x2.
GateMatrix1 reduced_density_1q(const StateVector &psi, int qubit);

} // namespace qfusion::sim
