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

#include "qfusion/reference.hpp"

#include <complex>

namespace qfusion::reference {

Dense identity(std::size_t dim) {
    Dense m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m.at(i, i) = cdouble(1);
    }
    return m;
}

Dense matmul(const Dense &lhs, const Dense &rhs) {
    detail::require(lhs.cols == rhs.rows, "matmul shape mismatch");
    Dense out(lhs.rows, rhs.cols);
    for (std::size_t r = 0; r < lhs.rows; ++r) {
        for (std::size_t k = 0; k < lhs.cols; ++k) {
            const cdouble v = lhs.at(r, k);
            if (v == cdouble(0)) {
                continue;
            }
            for (std::size_t c = 0; c < rhs.cols; ++c) {
                out.at(r, c) += v * rhs.at(k, c);
            }
        }
    }
    return out;
}

Dense adjoint(const Dense &m) {
    Dense out(m.cols, m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            out.at(c, r) = std::conj(m.at(r, c));
        }
    }
    return out;
}

Dense kron(const Dense &a, const Dense &b) {
    Dense out(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t ar = 0; ar < a.rows; ++ar) {
        for (std::size_t ac = 0; ac < a.cols; ++ac) {
            const cdouble v = a.at(ar, ac);
            if (v == cdouble(0)) {
                continue;
            }
            for (std::size_t br = 0; br < b.rows; ++br) {
                for (std::size_t bc = 0; bc < b.cols; ++bc) {
                    out.at(ar * b.rows + br, ac * b.cols + bc) =
                        v * b.at(br, bc);
                }
            }
        }
    }
    return out;
}

// Qubit 0 is the least significant bit, so the operator on qubit t is
// I_{2^{n-1-t}} (x) M (x) I_{2^t}.
Dense embed(const sim::GateMatrix1 &m, int target, int num_qubits) {
    detail::require_index(target >= 0 && target < num_qubits,
                          "gate target out of range");
    Dense gate(2, 2);
    for (int i = 0; i < 4; ++i) {
        gate.a[i] = m[i];
    }
    const std::size_t lo = std::size_t{1} << target;
    const std::size_t hi = std::size_t{1} << (num_qubits - 1 - target);
    return kron(identity(hi), kron(gate, identity(lo)));
}

Dense embed(const sim::GateMatrix2 &m, int target0, int target1,
            int num_qubits) {
    detail::require_index(target0 >= 0 && target0 < num_qubits &&
                              target1 >= 0 && target1 < num_qubits,
                          "gate target out of range");
    detail::require(target0 != target1, "two-qubit gate targets must differ");
    const std::size_t dim = std::size_t{1} << num_qubits;
    const std::size_t b0 = std::size_t{1} << target0;
    const std::size_t b1 = std::size_t{1} << target1;
    Dense out(dim, dim);
    for (std::size_t row = 0; row < dim; ++row) {
        const int lr = ((row & b0) ? 1 : 0) + ((row & b1) ? 2 : 0);
        const std::size_t base = row & ~(b0 | b1);
        for (int lc = 0; lc < 4; ++lc) {
            const std::size_t col =
                base | ((lc & 1) ? b0 : 0) | ((lc & 2) ? b1 : 0);
            out.at(row, col) = m[lr * 4 + lc];
        }
    }
    return out;
}

std::vector<cdouble> apply(const Dense &op, const std::vector<cdouble> &vec) {
    detail::require(op.cols == vec.size(), "operator shape mismatch");
    std::vector<cdouble> out(op.rows, cdouble(0));
    for (std::size_t r = 0; r < op.rows; ++r) {
        cdouble acc(0);
        for (std::size_t c = 0; c < op.cols; ++c) {
            acc += op.at(r, c) * vec[c];
        }
        out[r] = acc;
    }
    return out;
}

Dense evolve(const Dense &op, const Dense &rho) {
    return matmul(matmul(op, rho), adjoint(op));
}

Dense apply_kraus(const std::vector<sim::GateMatrix1> &ops, int target,
                  const Dense &rho) {
    detail::require(!ops.empty(), "Kraus channel needs at least one operator");
    int num_qubits = 0;
    while ((std::size_t{1} << num_qubits) < rho.rows) {
        ++num_qubits;
    }
    Dense out(rho.rows, rho.cols);
    for (const sim::GateMatrix1 &k : ops) {
        const Dense full = embed(k, target, num_qubits);
        const Dense term = evolve(full, rho);
        for (std::size_t i = 0; i < out.a.size(); ++i) {
            out.a[i] += term.a[i];
        }
    }
    return out;
}

Dense partial_trace(const Dense &rho, int num_qubits,
                    const std::vector<int> &keep) {
    detail::require(rho.rows == (std::size_t{1} << num_qubits) &&
                        rho.cols == rho.rows,
                    "density matrix shape mismatch");
    for (std::size_t i = 0; i + 1 < keep.size(); ++i) {
        detail::require(keep[i] < keep[i + 1],
                        "keep list must be strictly increasing");
    }
    std::vector<int> traced;
    for (int q = 0; q < num_qubits; ++q) {
        bool kept = false;
        for (int k : keep) {
            detail::require_index(k >= 0 && k < num_qubits,
                                  "keep qubit out of range");
            kept = kept || (k == q);
        }
        if (!kept) {
            traced.push_back(q);
        }
    }
    const std::size_t kdim = std::size_t{1} << keep.size();
    const std::size_t tdim = std::size_t{1} << traced.size();
    auto expand = [&](std::size_t kept_bits, std::size_t traced_bits) {
        std::size_t full = 0;
        for (std::size_t i = 0; i < keep.size(); ++i) {
            if (kept_bits & (std::size_t{1} << i)) {
                full |= std::size_t{1} << keep[i];
            }
        }
        for (std::size_t i = 0; i < traced.size(); ++i) {
            if (traced_bits & (std::size_t{1} << i)) {
                full |= std::size_t{1} << traced[i];
            }
        }
        return full;
    };
    Dense out(kdim, kdim);
    for (std::size_t r = 0; r < kdim; ++r) {
        for (std::size_t c = 0; c < kdim; ++c) {
            cdouble acc(0);
            for (std::size_t t = 0; t < tdim; ++t) {
                acc += rho.at(expand(r, t), expand(c, t));
            }
            out.at(r, c) = acc;
        }
    }
    return out;
}

double expectation_z(const Dense &rho, int num_qubits, int qubit) {
    detail::require_index(qubit >= 0 && qubit < num_qubits,
                          "qubit out of range");
    const std::size_t bit = std::size_t{1} << qubit;
    double acc = 0.0;
    for (std::size_t i = 0; i < rho.rows; ++i) {
        const double d = rho.at(i, i).real();
        acc += (i & bit) ? -d : d;
    }
    return acc;
}

} // namespace qfusion::reference
