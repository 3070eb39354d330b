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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "qfusion/circuit.hpp"
#include "qfusion/gates.hpp"
#include "qfusion/rng.hpp"
#include "qfusion/sim.hpp"

using namespace qfusion;

namespace {

std::vector<double> random_params(int count, std::uint64_t seed) {
    std::mt19937_64 engine = rng::make_engine(seed);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    std::vector<double> params(static_cast<std::size_t>(count));
    for (double &p : params) {
        p = angle(engine);
    }
    return params;
}

sim::StateVector run_on_zero(const circuit::Circuit &c,
                             const std::vector<double> &params) {
    sim::StateVector psi(c.num_qubits());
    circuit::execute(circuit::bind_params(c, params), psi);
    return psi;
}

} // namespace

TEST_CASE("per-layer parameter counts follow the ansatz layouts") {
    // {3n, n, n, 4n, 4n, 4n + n(n-1)} per layer for ids 1..6.
    for (int n : {2, 3, 4, 6}) {
        const int per_layer[] = {3 * n, n, n, 4 * n, 4 * n,
                                 4 * n + n * (n - 1)};
        for (int id = 1; id <= 6; ++id) {
            for (int layers : {1, 2, 5, 10}) {
                const circuit::Circuit c = circuit::build_ansatz(id, n, layers);
                CHECK(c.num_params() == per_layer[id - 1] * layers);
                CHECK(c.num_qubits() == n);
                CHECK_NOTHROW(c.validate());
            }
        }
    }
    // The values the 4-qubit, depth-10 experiments rely on.
    const int expected_4q_10l[] = {120, 40, 40, 160, 160, 280};
    for (int id = 1; id <= 6; ++id) {
        CHECK(circuit::build_ansatz(id, 4, 10).num_params() ==
              expected_4q_10l[id - 1]);
    }
}

TEST_CASE("ansatz builder rejects out-of-range arguments") {
    CHECK_THROWS_AS(circuit::build_ansatz(0, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(circuit::build_ansatz(7, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(circuit::build_ansatz(1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(circuit::build_ansatz(1, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(circuit::build_ansatz(1, 4, 15), std::invalid_argument);
}

TEST_CASE("validate flags unreferenced parameter slots") {
    circuit::Circuit c(2, 2);
    c.rx(0, 0); // slot 1 never used
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.ry(1, 1);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("global folding multiplies gate count and fixes the unitary") {
    for (int id = 1; id <= 6; ++id) {
        const circuit::Circuit c = circuit::build_ansatz(id, 3, 2);
        const std::vector<double> params =
            random_params(c.num_params(), 900 + static_cast<std::uint64_t>(id));
        const sim::StateVector base = run_on_zero(c, params);

        for (int scale : {1, 3, 5}) {
            const circuit::Circuit folded = circuit::fold_global(c, scale);
            CHECK(folded.size() == c.size() * static_cast<std::size_t>(scale));
            CHECK(folded.num_params() == c.num_params());
            const sim::StateVector psi = run_on_zero(folded, params);
            double worst = 0.0;
            for (std::size_t i = 0; i < psi.size(); ++i) {
                worst = std::max(worst,
                                 std::abs(psi[i] - base[i]));
            }
            CHECK(worst < 1e-9);
        }
    }
    const circuit::Circuit c = circuit::build_ansatz(1, 3, 1);
    CHECK_THROWS_AS(circuit::fold_global(c, 2), std::invalid_argument);
    CHECK_THROWS_AS(circuit::fold_global(c, 0), std::invalid_argument);
    CHECK_THROWS_AS(circuit::fold_global(c, -3), std::invalid_argument);
}

TEST_CASE("scale-1 folding is the identity transformation") {
    const circuit::Circuit c = circuit::build_ansatz(4, 4, 2);
    const circuit::Circuit folded = circuit::fold_global(c, 1);
    REQUIRE(folded.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(folded.gates()[i].kind == c.gates()[i].kind);
        CHECK(folded.gates()[i].targets == c.gates()[i].targets);
        CHECK(folded.gates()[i].param_slots == c.gates()[i].param_slots);
        CHECK(folded.gates()[i].inverted == c.gates()[i].inverted);
    }
}

TEST_CASE("inverted gates bind to the adjoint matrix") {
    circuit::Circuit c(1, 3);
    c.rot3(0, 0, 1, 2);
    const std::vector<double> params{0.7, -0.4, 1.9};

    const circuit::Circuit folded = circuit::fold_global(c, 3);
    REQUIRE(folded.size() == 3);
    CHECK(!folded.gates()[0].inverted);
    CHECK(folded.gates()[1].inverted);
    CHECK(!folded.gates()[2].inverted);

    const circuit::BoundCircuit bound = circuit::bind_params(folded, params);
    const sim::GateMatrix1 u = bound.gates[0].m1;
    const sim::GateMatrix1 udag = bound.gates[1].m1;
    // udag must be the conjugate transpose of u.
    CHECK(std::abs(udag[0] - std::conj(u[0])) < 1e-15);
    CHECK(std::abs(udag[1] - std::conj(u[2])) < 1e-15);
    CHECK(std::abs(udag[2] - std::conj(u[1])) < 1e-15);
    CHECK(std::abs(udag[3] - std::conj(u[3])) < 1e-15);
}

TEST_CASE("parameter occurrences carry fold-aware slots and signs") {
    circuit::Circuit c(1, 3);
    c.rot3(0, 0, 1, 2);
    const circuit::Circuit folded = circuit::fold_global(c, 3);
    const std::vector<circuit::ParamOccurrence> occ =
        circuit::parameter_occurrences(folded);
    REQUIRE(occ.size() == 9); // 3 angles x 3 copies

    // The inverse executes RZ(-phi) RY(-theta) RZ(-omega): position j of an
    // inverted Rot3 reads slot param_slots[2 - j] with sign -1.
    int checked = 0;
    for (const circuit::ParamOccurrence &o : occ) {
        if (o.gate_index == 1) {
            CHECK(o.sign == -1.0);
            CHECK(o.slot == 2 - o.position);
            ++checked;
        } else {
            CHECK(o.sign == 1.0);
            CHECK(o.slot == o.position);
        }
        CHECK(o.rule == circuit::ShiftRule::TwoTerm);
    }
    CHECK(checked == 3);

    // Controlled rotations use the four-term rule.
    circuit::Circuit cr(2, 1);
    cr.crx(0, 1, 0);
    const auto cr_occ = circuit::parameter_occurrences(cr);
    REQUIRE(cr_occ.size() == 1);
    CHECK(cr_occ[0].rule == circuit::ShiftRule::FourTerm);
}

TEST_CASE("bind_gate_at reproduces full binding under shifts") {
    const circuit::Circuit c = circuit::build_ansatz(6, 3, 2);
    const std::vector<double> params = random_params(c.num_params(), 77);
    std::mt19937_64 engine = rng::make_engine(78);

    const std::vector<circuit::ParamOccurrence> occ =
        circuit::parameter_occurrences(c);
    for (int rep = 0; rep < 25; ++rep) {
        const circuit::ParamOccurrence &o =
            occ[engine() % occ.size()];
        circuit::AngleShift shift;
        shift.gate_index = o.gate_index;
        shift.position = o.position;
        shift.delta = M_PI / 2.0;

        const circuit::BoundCircuit full =
            circuit::bind_params(c, params, shift);
        const circuit::BoundGate patched =
            circuit::bind_gate_at(c, params, o.gate_index, shift);

        const circuit::BoundGate &expect =
            full.gates[static_cast<std::size_t>(o.gate_index)];
        CHECK(patched.arity == expect.arity);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(patched.m1[i] - expect.m1[i]) < 1e-15);
        }
        for (std::size_t i = 0; i < 16; ++i) {
            CHECK(std::abs(patched.m2[i] - expect.m2[i]) < 1e-15);
        }
    }
}

TEST_CASE("shifting an angle matches shifting the parameter for single use") {
    // With exactly one occurrence per slot, an AngleShift equals adding the
    // delta to the parameter itself.
    const circuit::Circuit c = circuit::build_ansatz(1, 2, 1);
    std::vector<double> params = random_params(c.num_params(), 555);
    const std::vector<circuit::ParamOccurrence> occ =
        circuit::parameter_occurrences(c);

    const circuit::ParamOccurrence &o = occ[4];
    circuit::AngleShift shift;
    shift.gate_index = o.gate_index;
    shift.position = o.position;
    shift.delta = 0.3125;

    sim::StateVector via_shift(c.num_qubits());
    circuit::execute(circuit::bind_params(c, params, shift), via_shift);

    params[static_cast<std::size_t>(o.slot)] += 0.3125;
    sim::StateVector via_param(c.num_qubits());
    circuit::execute(circuit::bind_params(c, params), via_param);

    for (std::size_t i = 0; i < via_shift.size(); ++i) {
        CHECK(std::abs(via_shift[i] - via_param[i]) < 1e-14);
    }
}

TEST_CASE("binding validates the parameter vector length") {
    const circuit::Circuit c = circuit::build_ansatz(2, 2, 1);
    CHECK_THROWS_AS(
        static_cast<void>(circuit::bind_params(c, {0.1})),
        std::invalid_argument);
}

TEST_CASE("to_text lists every gate and marks inversions") {
    circuit::Circuit c(2, 1);
    c.h(0).cnot(0, 1).ry(1, 0);
    const std::string text = circuit::to_text(circuit::fold_global(c, 3));
    CHECK(text.find("H") != std::string::npos);
    CHECK(text.find("CNOT") != std::string::npos);
    CHECK(text.find("RY") != std::string::npos);
    CHECK(text.find("inv") != std::string::npos);
    // Nine gates -> nine lines after the header.
    std::size_t lines = 0;
    for (char ch : text) {
        if (ch == '\n') {
            ++lines;
        }
    }
    CHECK(lines >= 9);
}
