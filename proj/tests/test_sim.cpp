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

// Cross-checks of the strided in-place kernels against the dense serial
// reference, plus the global invariants (norm, trace, Hermiticity) the
// kernels must preserve.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qfusion/gates.hpp"
#include "qfusion/noise.hpp"
#include "qfusion/reference.hpp"
#include "qfusion/rng.hpp"
#include "qfusion/sim.hpp"

using namespace qfusion;

namespace {

sim::StateVector random_state(int num_qubits, std::uint64_t seed) {
    std::mt19937_64 engine = rng::make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cdouble> amps(std::size_t{1} << num_qubits);
    for (cdouble &a : amps) {
        a = cdouble(gauss(engine), gauss(engine));
    }
    sim::StateVector psi = sim::StateVector::from_amplitudes(std::move(amps));
    psi.normalize();
    return psi;
}

reference::Dense column(const sim::StateVector &psi) {
    reference::Dense v(psi.size(), 1);
    v.a = psi.amplitudes();
    return v;
}

reference::Dense dense_of(const sim::DensityMatrix &rho) {
    reference::Dense m(rho.dim(), rho.dim());
    m.a = rho.elements();
    return m;
}

double max_delta(const std::vector<cdouble> &a, const std::vector<cdouble> &b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

sim::GateMatrix1 random_gate1(std::mt19937_64 &engine) {
    std::uniform_int_distribution<int> pick(0, 7);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    switch (pick(engine)) {
    case 0:
        return gates::h();
    case 1:
        return gates::x();
    case 2:
        return gates::y();
    case 3:
        return gates::z();
    case 4:
        return gates::rx(angle(engine));
    case 5:
        return gates::ry(angle(engine));
    case 6:
        return gates::rz(angle(engine));
    default:
        return gates::rot3(angle(engine), angle(engine), angle(engine));
    }
}

sim::GateMatrix2 random_gate2(std::mt19937_64 &engine) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    switch (pick(engine)) {
    case 0:
        return gates::cnot();
    case 1:
        return gates::cz();
    case 2:
        return gates::crx(angle(engine));
    default:
        return gates::crz(angle(engine));
    }
}

} // namespace

TEST_CASE("single-qubit statevector kernel matches the dense reference") {
    for (int n = 1; n <= 6; ++n) {
        std::mt19937_64 engine = rng::make_engine(100 + n);
        for (int target = 0; target < n; ++target) {
            for (int rep = 0; rep < 4; ++rep) {
                sim::StateVector psi = random_state(n, engine());
                const sim::GateMatrix1 m = random_gate1(engine);
                const std::vector<cdouble> expected = reference::apply(
                    reference::embed(m, target, n), psi.amplitudes());
                sim::apply_gate(psi, m, target);
                CHECK(max_delta(psi.amplitudes(), expected) < 1e-13);
            }
        }
    }
}

TEST_CASE("two-qubit statevector kernel matches the dense reference") {
    for (int n = 2; n <= 5; ++n) {
        std::mt19937_64 engine = rng::make_engine(200 + n);
        for (int t0 = 0; t0 < n; ++t0) {
            for (int t1 = 0; t1 < n; ++t1) {
                if (t0 == t1) {
                    continue;
                }
                sim::StateVector psi = random_state(n, engine());
                const sim::GateMatrix2 m = random_gate2(engine);
                const std::vector<cdouble> expected = reference::apply(
                    reference::embed(m, t0, t1, n), psi.amplitudes());
                sim::apply_gate(psi, m, t0, t1);
                CHECK(max_delta(psi.amplitudes(), expected) < 1e-13);
            }
        }
    }
}

TEST_CASE("density-matrix gate kernels match dense conjugation") {
    for (int n = 1; n <= 4; ++n) {
        std::mt19937_64 engine = rng::make_engine(300 + n);
        sim::StateVector psi = random_state(n, engine());
        sim::DensityMatrix rho = sim::DensityMatrix::from_statevector(psi);

        for (int target = 0; target < n; ++target) {
            const sim::GateMatrix1 m = random_gate1(engine);
            const reference::Dense expected = reference::evolve(
                reference::embed(m, target, n), dense_of(rho));
            sim::apply_gate(rho, m, target);
            CHECK(max_delta(rho.elements(), expected.a) < 1e-12);
        }
        if (n >= 2) {
            for (int rep = 0; rep < 6; ++rep) {
                const int t0 = static_cast<int>(engine() % n);
                int t1 = static_cast<int>(engine() % n);
                if (t0 == t1) {
                    continue;
                }
                const sim::GateMatrix2 m = random_gate2(engine);
                const reference::Dense expected = reference::evolve(
                    reference::embed(m, t0, t1, n), dense_of(rho));
                sim::apply_gate(rho, m, t0, t1);
                CHECK(max_delta(rho.elements(), expected.a) < 1e-12);
            }
        }
    }
}

TEST_CASE("Kraus application matches the dense reference") {
    for (noise::ChannelKind kind :
         {noise::ChannelKind::Depolarizing, noise::ChannelKind::AmplitudeDamping,
          noise::ChannelKind::PhaseDamping}) {
        for (int n = 1; n <= 3; ++n) {
            std::mt19937_64 engine = rng::make_engine(400 + n);
            sim::StateVector psi = random_state(n, engine());
            sim::DensityMatrix rho = sim::DensityMatrix::from_statevector(psi);
            const noise::KrausChannel ch = noise::make_channel(kind, 0.07);
            for (int target = 0; target < n; ++target) {
                const reference::Dense expected = reference::apply_kraus(
                    ch.operators, target, dense_of(rho));
                sim::apply_kraus(rho, ch.operators, target);
                CHECK(max_delta(rho.elements(), expected.a) < 1e-12);
            }
        }
    }
}

TEST_CASE("norm is preserved across 1000 random gates") {
    const int n = 10;
    std::mt19937_64 engine = rng::make_engine(1717);
    sim::StateVector psi(n);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    std::uniform_int_distribution<int> arity(0, 3);
    for (int step = 0; step < 1000; ++step) {
        if (arity(engine) == 0) {
            int t0 = qubit(engine);
            int t1 = qubit(engine);
            while (t1 == t0) {
                t1 = qubit(engine);
            }
            sim::apply_gate(psi, random_gate2(engine), t0, t1);
        } else {
            sim::apply_gate(psi, random_gate1(engine), qubit(engine));
        }
    }
    CHECK(std::fabs(psi.norm_squared() - 1.0) < 1e-10);
}

TEST_CASE("noisy density matrices stay Hermitian with unit trace") {
    const int n = 4;
    std::mt19937_64 engine = rng::make_engine(555);
    for (noise::ChannelKind kind :
         {noise::ChannelKind::Depolarizing, noise::ChannelKind::AmplitudeDamping,
          noise::ChannelKind::PhaseDamping}) {
        for (double p : {0.01, 0.1, 0.4}) {
            const noise::KrausChannel ch = noise::make_channel(kind, p);
            sim::DensityMatrix rho(n);
            std::uniform_int_distribution<int> qubit(0, n - 1);
            for (int step = 0; step < 60; ++step) {
                const int target = qubit(engine);
                sim::apply_gate(rho, random_gate1(engine), target);
                sim::apply_kraus(rho, ch.operators, target);
            }
            CHECK(std::fabs(rho.trace_real() - 1.0) < 1e-10);
            double herm = 0.0;
            for (std::size_t r = 0; r < rho.dim(); ++r) {
                for (std::size_t c = 0; c < rho.dim(); ++c) {
                    herm = std::max(herm, std::abs(rho.at(r, c) -
                                                   std::conj(rho.at(c, r))));
                }
            }
            CHECK(herm < 1e-10);
            CHECK(rho.purity() <= 1.0 + 1e-10);
        }
    }
}

TEST_CASE("statevector and density matrix agree without noise") {
    const int n = 5;
    std::mt19937_64 engine = rng::make_engine(808);
    sim::StateVector psi(n);
    sim::DensityMatrix rho(n);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    for (int step = 0; step < 40; ++step) {
        const int t0 = qubit(engine);
        int t1 = qubit(engine);
        while (t1 == t0) {
            t1 = qubit(engine);
        }
        if (step % 3 == 0) {
            const sim::GateMatrix2 m = random_gate2(engine);
            sim::apply_gate(psi, m, t0, t1);
            sim::apply_gate(rho, m, t0, t1);
        } else {
            const sim::GateMatrix1 m = random_gate1(engine);
            sim::apply_gate(psi, m, t0);
            sim::apply_gate(rho, m, t0);
        }
    }
    const sim::DensityMatrix pure = sim::DensityMatrix::from_statevector(psi);
    CHECK(max_delta(rho.elements(), pure.elements()) < 1e-11);
    for (int q = 0; q < n; ++q) {
        CHECK(std::fabs(sim::expectation_z(psi, q) -
                        sim::expectation_z(rho, q)) < 1e-11);
    }
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("expectation_z matches the dense reference") {
    const int n = 4;
    std::mt19937_64 engine = rng::make_engine(909);
    const sim::StateVector psi = random_state(n, engine());
    const sim::DensityMatrix rho = sim::DensityMatrix::from_statevector(psi);
    for (int q = 0; q < n; ++q) {
        const double expected =
            reference::expectation_z(dense_of(rho), n, q);
        CHECK(sim::expectation_z(psi, q) ==
              doctest::Approx(expected).epsilon(1e-12));
        CHECK(sim::expectation_z(rho, q) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("reduced_density_1q matches the dense partial trace") {
    const int n = 4;
    std::mt19937_64 engine = rng::make_engine(1001);
    const sim::StateVector psi = random_state(n, engine());
    const reference::Dense rho = dense_of(
        sim::DensityMatrix::from_statevector(psi));
    for (int q = 0; q < n; ++q) {
        const reference::Dense expected =
            reference::partial_trace(rho, n, {q});
        const sim::GateMatrix1 got = sim::reduced_density_1q(psi, q);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(got[i] - expected.a[i]) < 1e-12);
        }
    }
}

TEST_CASE("kernel results are identical for any thread count") {
#ifdef _OPENMP
    const int n = 12; // above kParallelThreshold group counts
    const int original_threads = omp_get_max_threads();
    auto run = [n](int threads) {
        omp_set_num_threads(threads);
        std::mt19937_64 engine = rng::make_engine(31337);
        sim::StateVector psi(n);
        std::uniform_int_distribution<int> qubit(0, n - 1);
        for (int step = 0; step < 50; ++step) {
            const int t0 = qubit(engine);
            int t1 = qubit(engine);
            while (t1 == t0) {
                t1 = qubit(engine);
            }
            sim::apply_gate(psi, random_gate1(engine), t0);
            sim::apply_gate(psi, random_gate2(engine), t0, t1);
        }
        return psi.amplitudes();
    };
    const std::vector<cdouble> serial = run(1);
    const std::vector<cdouble> parallel = run(4);
    omp_set_num_threads(original_threads);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i] == parallel[i]); // bitwise, not approximate
    }
#endif
}

TEST_CASE("constructors validate their inputs") {
    CHECK_THROWS_AS(sim::StateVector(0), std::invalid_argument);
    CHECK_THROWS_AS(sim::StateVector(kMaxQubits + 1), std::invalid_argument);
    CHECK_THROWS_AS(sim::StateVector::from_amplitudes({cdouble(1), cdouble(0),
                                                       cdouble(0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(sim::DensityMatrix(0), std::invalid_argument);

    sim::StateVector psi(2);
    CHECK_THROWS_AS(sim::apply_gate(psi, gates::h(), 2), std::out_of_range);
    CHECK_THROWS_AS(sim::apply_gate(psi, gates::cnot(), 0, 0),
                    std::invalid_argument);

    sim::StateVector zero = sim::StateVector::from_amplitudes(
        {cdouble(0), cdouble(0)});
    CHECK_THROWS_AS(zero.normalize(), std::invalid_argument);
}
