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

#include "qfusion/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

namespace qfusion::sim {
namespace {

// Spreads i across position t, leaving a zero bit there.
inline std::uint64_t insert_zero_bit(std::uint64_t i, int t) {
    const std::uint64_t low = i & ((std::uint64_t{1} << t) - 1);
    const std::uint64_t high = (i >> t) << (t + 1);
    return high | low;
}

GateMatrix1 conjugated(const GateMatrix1 &m) {
    return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]),
            std::conj(m[3])};
}

GateMatrix2 conjugated(const GateMatrix2 &m) {
    GateMatrix2 out;
    for (int i = 0; i < 16; ++i) {
        out[i] = std::conj(m[i]);
    }
    return out;
}

// In-place single-qubit update on a flat array of 2^k amplitudes. Each loop
// iteration owns a disjoint index pair, so the parallel form is exact.
void apply_1q(cdouble *amps, std::size_t size, const GateMatrix1 &m, int t) {
    const auto count = static_cast<std::int64_t>(size >> 1);
    const std::uint64_t bit = std::uint64_t{1} << t;
    const cdouble m00 = m[0], m01 = m[1], m10 = m[2], m11 = m[3];
#pragma omp parallel for schedule(static) if (count >= kParallelThreshold)
    for (std::int64_t i = 0; i < count; ++i) {
        const std::uint64_t i0 =
            insert_zero_bit(static_cast<std::uint64_t>(i), t);
        const std::uint64_t i1 = i0 | bit;
        const cdouble a0 = amps[i0];
        const cdouble a1 = amps[i1];
        amps[i0] = m00 * a0 + m01 * a1;
        amps[i1] = m10 * a0 + m11 * a1;
    }
}

// In-place two-qubit update; t0 is the low bit of the 4x4 local index.
void apply_2q(cdouble *amps, std::size_t size, const GateMatrix2 &m, int t0,
              int t1) {
    const auto count = static_cast<std::int64_t>(size >> 2);
    const int p = std::min(t0, t1);
    const int q = std::max(t0, t1);
    const std::uint64_t b0 = std::uint64_t{1} << t0;
    const std::uint64_t b1 = std::uint64_t{1} << t1;
#pragma omp parallel for schedule(static) if (count >= kParallelThreshold)
    for (std::int64_t i = 0; i < count; ++i) {
        // Zero bits deposited at q then p; the q slot shifts into place.
        const std::uint64_t base = insert_zero_bit(
            insert_zero_bit(static_cast<std::uint64_t>(i), q - 1), p);
        std::uint64_t idx[4];
        cdouble a[4];
        for (int l = 0; l < 4; ++l) {
            idx[l] = base | ((l & 1) ? b0 : 0) | ((l & 2) ? b1 : 0);
            a[l] = amps[idx[l]];
        }
        for (int l = 0; l < 4; ++l) {
            cdouble acc = m[l * 4 + 0] * a[0] + m[l * 4 + 1] * a[1] +
                          m[l * 4 + 2] * a[2] + m[l * 4 + 3] * a[3];
            amps[idx[l]] = acc;
        }
    }
}

void check_target(int target, int num_qubits) {
    detail::require_index(target >= 0 && target < num_qubits,
                          "gate target out of range");
}

void check_targets(int t0, int t1, int num_qubits) {
    check_target(t0, num_qubits);
    check_target(t1, num_qubits);
    detail::require(t0 != t1, "two-qubit gate targets must differ");
}

} // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    detail::require(num_qubits >= 1 && num_qubits <= kMaxQubits,
                    "qubit count out of range");
    amps_.assign(std::size_t{1} << num_qubits, cdouble(0));
    amps_[0] = cdouble(1);
}

StateVector StateVector::from_amplitudes(std::vector<cdouble> amps) {
    const std::size_t n = amps.size();
    detail::require(n >= 2 && (n & (n - 1)) == 0,
                    "amplitude count must be a power of two");
    int bits = 0;
    while ((std::size_t{1} << bits) < n) {
        ++bits;
    }
    detail::require(bits <= kMaxQubits, "qubit count out of range");
    StateVector psi;
    psi.num_qubits_ = bits;
    psi.amps_ = std::move(amps);
    return psi;
}

void StateVector::reset() {
    std::fill(amps_.begin(), amps_.end(), cdouble(0));
    amps_[0] = cdouble(1);
}

double StateVector::norm_squared() const {
    double acc = 0.0;
    for (const cdouble &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

void StateVector::normalize() {
    const double n2 = norm_squared();
    detail::require(n2 > 0.0, "cannot normalize the zero vector");
    const double inv = 1.0 / std::sqrt(n2);
    for (cdouble &a : amps_) {
        a *= inv;
    }
}

DensityMatrix::DensityMatrix(int num_qubits) : num_qubits_(num_qubits) {
    detail::require(num_qubits >= 1 && num_qubits <= kMaxQubits,
                    "qubit count out of range");
    dim_ = std::size_t{1} << num_qubits;
    elems_.assign(dim_ * dim_, cdouble(0));
    elems_[0] = cdouble(1);
}

DensityMatrix DensityMatrix::from_statevector(const StateVector &psi) {
    DensityMatrix rho(psi.num_qubits());
    const auto count = static_cast<std::int64_t>(rho.dim_ * rho.dim_);
    const std::size_t dim = rho.dim_;
    const cdouble *a = psi.data();
    cdouble *out = rho.elems_.data();
#pragma omp parallel for schedule(static) if (count >= kParallelThreshold)
    for (std::int64_t i = 0; i < count; ++i) {
        const std::size_t r = static_cast<std::size_t>(i) / dim;
        const std::size_t c = static_cast<std::size_t>(i) % dim;
        out[i] = a[r] * std::conj(a[c]);
    }
    return rho;
}

void DensityMatrix::reset() {
    std::fill(elems_.begin(), elems_.end(), cdouble(0));
    elems_[0] = cdouble(1);
}

double DensityMatrix::trace_real() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        acc += elems_[i * dim_ + i].real();
    }
    return acc;
}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum_{r,c} rho[r,c] rho[c,r] = sum |rho[r,c]|^2 for
    // Hermitian rho.
    double acc = 0.0;
    for (const cdouble &e : elems_) {
        acc += std::norm(e);
    }
    return acc;
}

void apply_gate(StateVector &psi, const GateMatrix1 &m, int target) {
    check_target(target, psi.num_qubits());
    apply_1q(psi.data(), psi.size(), m, target);
}

void apply_gate(StateVector &psi, const GateMatrix2 &m, int target0,
                int target1) {
    check_targets(target0, target1, psi.num_qubits());
    apply_2q(psi.data(), psi.size(), m, target0, target1);
}

// A density matrix on n qubits is a 2n-qubit flat array whose low n bits
// index the column and high n bits the row. U rho U^dagger is U applied on
// the row bits and conj(U) on the column bits.
void apply_gate(DensityMatrix &rho, const GateMatrix1 &m, int target) {
    check_target(target, rho.num_qubits());
    const std::size_t total = rho.dim() * rho.dim();
    apply_1q(rho.elements().data(), total, m, rho.num_qubits() + target);
    apply_1q(rho.elements().data(), total, conjugated(m), target);
}

void apply_gate(DensityMatrix &rho, const GateMatrix2 &m, int target0,
                int target1) {
    check_targets(target0, target1, rho.num_qubits());
    const std::size_t total = rho.dim() * rho.dim();
    const int n = rho.num_qubits();
    apply_2q(rho.elements().data(), total, m, n + target0, n + target1);
    apply_2q(rho.elements().data(), total, conjugated(m), target0, target1);
}

void apply_kraus(DensityMatrix &rho, const std::vector<GateMatrix1> &ops,
                 int target) {
    check_target(target, rho.num_qubits());
    detail::require(!ops.empty(), "Kraus channel needs at least one operator");
    const std::size_t total = rho.dim() * rho.dim();
    const int n = rho.num_qubits();
    std::vector<cdouble> acc(total, cdouble(0));
    std::vector<cdouble> scratch;
    for (const GateMatrix1 &k : ops) {
        scratch = rho.elements();
        apply_1q(scratch.data(), total, k, n + target);
        apply_1q(scratch.data(), total, conjugated(k), target);
        const auto count = static_cast<std::int64_t>(total);
        cdouble *dst = acc.data();
        const cdouble *src = scratch.data();
#pragma omp parallel for schedule(static) if (count >= kParallelThreshold)
        for (std::int64_t i = 0; i < count; ++i) {
            dst[i] += src[i];
        }
    }
    rho.elements() = std::move(acc);
}

double expectation_z(const StateVector &psi, int qubit) {
    check_target(qubit, psi.num_qubits());
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    // Serial reduction keeps results bitwise stable across thread counts.
    double acc = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double p = std::norm(psi[i]);
        acc += (i & bit) ? -p : p;
    }
    return acc;
}

double expectation_z(const DensityMatrix &rho, int qubit) {
    check_target(qubit, rho.num_qubits());
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    double acc = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        const double d = rho.at(i, i).real();
        acc += (i & bit) ? -d : d;
    }
    return acc;
}

GateMatrix1 reduced_density_1q(const StateVector &psi, int qubit) {
    check_target(qubit, psi.num_qubits());
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    double r00 = 0.0;
    double r11 = 0.0;
    cdouble r01(0);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (i & bit) {
            continue;
        }
        const cdouble a0 = psi[i];
        const cdouble a1 = psi[i | bit];
        r00 += std::norm(a0);
        r11 += std::norm(a1);
        r01 += a0 * std::conj(a1);
    }
    return {cdouble(r00), r01, std::conj(r01), cdouble(r11)};
}

} // namespace qfusion::sim
