// Copyright 2026 The czsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "czsynth/circuit.hpp"

#include <gtest/gtest.h>

#include "czsynth/synth3.hpp"
#include "test_util.hpp"

using namespace czsynth;
using czsynth::testing::cz_matrix;
using czsynth::testing::random_circuit;

namespace {

ComplexMatrix m2(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

TEST(circuit, gate_matrix_conventions) {
    const Complex i(0, 1);
    double t = 0.3;
    ASSERT_TRUE(Gate::rz(0, t).matrix().isApprox(m2(std::exp(i * t), 0, 0, std::exp(-i * t))));
    ASSERT_TRUE(Gate::ry(0, t).matrix().isApprox(m2(std::cos(t), std::sin(t), -std::sin(t), std::cos(t))));
    ASSERT_TRUE(Gate::rx(0, t).matrix().isApprox(m2(std::cos(t), i * std::sin(t), i * std::sin(t), std::cos(t))));
    ASSERT_TRUE(Gate::delta(0, i).matrix().isApprox(Gate::s(0).matrix()));
    ASSERT_TRUE((Gate::t(0).matrix() * Gate::t(0).matrix()).isApprox(Gate::s(0).matrix()));
    ASSERT_TRUE((Gate::t(0).matrix() * Gate::tdg(0).matrix()).isApprox(identity(1)));
    // RZ(θ) = exp(iZθ) with no factor of one half.
    ComplexMatrix z = Gate::z(0).matrix();
    ASSERT_TRUE(Gate::rz(0, t).matrix().isApprox(std::cos(t) * identity(1) + i * std::sin(t) * z));
}

TEST(circuit, simulate_basics) {
    ASSERT_EQ(simulate(Circuit(3)), identity(3));

    Circuit cx(2);
    cx.add(Gate::cx(0, 1));
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(0, 0) = expect(1, 1) = expect(2, 3) = expect(3, 2) = 1;
    ASSERT_EQ(simulate(cx), expect);

    Circuit cz(3);
    cz.add(Gate::cz(2, 0));
    ASSERT_EQ(simulate(cz), cz_matrix(0, 2, 3));

    // Chronological order: X then Z gives Z·X.
    Circuit xz(1);
    xz.add(Gate::x(0)).add(Gate::z(0));
    ASSERT_TRUE(simulate(xz).isApprox(m2(0, 1, -1, 0)));

    // Qubit 0 is the most significant bit.
    Circuit x0(2);
    x0.add(Gate::x(0));
    ASSERT_EQ(simulate(x0)(2, 0), Complex(1, 0));
}

TEST(circuit, simulate_distributes_over_concatenation) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; trial++) {
        Circuit a = random_circuit(3, 12, rng);
        Circuit b = random_circuit(3, 12, rng);
        Circuit ab = a;
        ab.append(b);
        ASSERT_LT((simulate(ab) - simulate(b) * simulate(a)).norm(), 1e-12);
    }
}

TEST(circuit, validate_rejects_bad_indices) {
    Circuit c(2);
    c.add(Gate::cz(0, 2));
    ASSERT_THROW(simulate(c), Error);
    Circuit d(2);
    d.add(Gate::cx(1, 1));
    ASSERT_THROW(simulate(d), Error);
    ASSERT_THROW(simulate(Circuit(7)), Error);
}

TEST(circuit, h_conjugate_examples) {
    Circuit cx(2);
    cx.add(Gate::cx(0, 1));
    Circuit expect(2);
    expect.add(Gate::h(1)).add(Gate::cz(0, 1)).add(Gate::h(1));
    ASSERT_EQ(h_conjugate(cx, HDirection::cx_to_cz), expect);
    ASSERT_EQ(h_conjugate(Circuit(2), HDirection::cx_to_cz), Circuit(2));

    Circuit fig = reference("figure1");
    Circuit czs = h_conjugate(fig, HDirection::cx_to_cz);
    ASSERT_EQ(cz_profile(czs).total, 6);
    ASSERT_LT(dist_phase(simulate(czs), czsynth::testing::toffoli_matrix()), 1e-10);
}

TEST(circuit, h_conjugate_preserves_unitary) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 1000; trial++) {
        Circuit c = random_circuit(3, 15, rng);
        ComplexMatrix u = simulate(c);
        Circuit a = h_conjugate(c, HDirection::cx_to_cz);
        Circuit b = h_conjugate(c, HDirection::cz_to_cx);
        ASSERT_LT(dist_phase(simulate(a), u), 1e-10);
        ASSERT_LT(dist_phase(simulate(b), u), 1e-10);
        ASSERT_EQ(cz_profile(a).total, cz_profile(c).total);
        ASSERT_EQ(cz_profile(b).total, cz_profile(c).total);
        for (const auto &g : a.gates) {
            ASSERT_NE(g.kind, GateKind::CX);
        }
        for (const auto &g : b.gates) {
            ASSERT_NE(g.kind, GateKind::CZ);
        }
    }
}

TEST(circuit, demorgan_examples) {
    Circuit c(2);
    c.add(Gate::x(0)).add(Gate::cz(0, 1));
    Circuit expect(2);
    expect.add(Gate::cz(0, 1)).add(Gate::x(0)).add(Gate::z(1));
    ASSERT_EQ(demorgan_push(c), expect);

    Circuit disjoint(3);
    disjoint.add(Gate::x(2)).add(Gate::cz(0, 1));
    Circuit pushed = demorgan_push(disjoint);
    ASSERT_EQ(simulate(pushed), simulate(disjoint));
    ASSERT_EQ(pushed.two_qubit_count(), 1u);
}

TEST(circuit, demorgan_is_exact_and_clears_x) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 1000; trial++) {
        Circuit c = random_circuit(3, 20, rng);
        Circuit p = demorgan_push(c);
        ASSERT_LT((simulate(p) - simulate(c)).norm(), 1e-10);
        ASSERT_EQ(cz_profile(p).total, cz_profile(c).total);
        // No X may precede a two-qubit gate on its wire.
        for (size_t i = 0; i < p.size(); i++) {
            if (p.gates[i].kind != GateKind::X) {
                continue;
            }
            for (size_t j = i + 1; j < p.size(); j++) {
                ASSERT_FALSE(p.gates[j].is_two_qubit() && p.gates[j].touches(p.gates[i].q0));
            }
        }
    }
}

TEST(circuit, cz_profile_examples) {
    CzProfile fig = cz_profile(reference("figure1"));
    ASSERT_EQ(fig.total, 6);
    ASSERT_EQ(fig.incidences, (std::vector<int>{4, 4, 4}));
    CzProfile ccz = cz_profile(reference("ccz_eq"));
    ASSERT_EQ(ccz.total, 6);
    ASSERT_EQ(ccz.incidences, (std::vector<int>{4, 4, 4}));
    CzProfile empty = cz_profile(Circuit(3));
    ASSERT_EQ(empty.total, 0);
    ASSERT_EQ(empty.incidences, (std::vector<int>{0, 0, 0}));

    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; trial++) {
        CzProfile p = cz_profile(random_circuit(4, 30, rng));
        int sum = 0;
        for (int k : p.incidences) {
            sum += k;
        }
        ASSERT_EQ(sum, 2 * p.total);
    }
}

TEST(circuit, parse_examples) {
    Circuit c = parse("CZ 0 1");
    ASSERT_EQ(c.n_qubits, 2);
    ASSERT_EQ(c.gates.at(0), Gate::cz(0, 1));

    Circuit r = parse("RZ 0 0.7853981633974483\n");
    ASSERT_EQ(r.gates.at(0).kind, GateKind::RZ);
    ASSERT_DOUBLE_EQ(r.gates.at(0).theta, kPi / 4);

    Circuit h = parse("# qubits: 4\n# a comment\nH 1   # trailing\n\nDELTA 3 0 1\n");
    ASSERT_EQ(h.n_qubits, 4);
    ASSERT_EQ(h.size(), 2u);
    ASSERT_EQ(h.gates[1].eta, Complex(0, 1));
}

TEST(circuit, parse_errors_report_lines) {
    auto line_of = [](const std::string &text) {
        try {
            parse(text);
        } catch (const ParseError &e) {
            return e.line;
        }
        return -1;
    };
    ASSERT_EQ(line_of("H 0\nFOO 1\n"), 2);
    ASSERT_EQ(line_of("H 0\nH 0\nCZ 1\n"), 3);
    ASSERT_EQ(line_of("RZ 0 abc"), 1);
    ASSERT_EQ(line_of("CX 2 2"), 1);
    ASSERT_EQ(line_of("U 0 1 0 0 0 0 0 2 0"), 1);
    ASSERT_EQ(line_of("DELTA 0 0 0"), 1);
    ASSERT_THROW(parse("# qubits: 2\nCZ 0 2\n"), ParseError);
}

TEST(circuit, emit_parse_roundtrip) {
    std::mt19937_64 rng(30);
    for (int trial = 0; trial < 300; trial++) {
        Circuit c = random_circuit(4, 25, rng);
        std::string text = emit(c);
        Circuit back = parse(text);
        ASSERT_EQ(back, c);
        ASSERT_EQ(emit(back), text);
    }
}

TEST(circuit, relabeled_moves_wires) {
    Circuit c(3);
    c.add(Gate::cz(0, 1)).add(Gate::h(2));
    Circuit r = c.relabeled({2, 0, 1}, 3);
    Circuit expect(3);
    expect.add(Gate::cz(2, 0)).add(Gate::h(1));
    ASSERT_EQ(r, expect);
}
