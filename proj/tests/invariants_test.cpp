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

#include "czsynth/invariants.hpp"

#include <gtest/gtest.h>

#include "czsynth/synth3.hpp"
#include "test_util.hpp"

using namespace czsynth;
using czsynth::testing::ccz_matrix;
using czsynth::testing::cz_matrix;

namespace {

MuxSpectrum spectrum_of(std::vector<Complex> v) {
    MuxSpectrum s;
    s.values = std::move(v);
    return s;
}

bool same_multiset(const MuxSpectrum &a, std::vector<Complex> b, double tol = 1e-8) {
    return match_multisets(a.values, b, tol).has_value();
}

DiagonalOperator diag(const ComplexMatrix &m) {
    return DiagonalOperator::from_matrix(m);
}

bool near_lambda_multiset(const DiagInvariants &a, const DiagInvariants &b, double tol) {
    std::vector<Complex> x(a.lambda.begin(), a.lambda.end()), y(b.lambda.begin(), b.lambda.end());
    return match_multisets(x, y, tol).has_value() && std::abs(a.xi - b.xi) < tol;
}

// Diagonal or antidiagonal one-qubit operator with random phases. Both sides of a move must
// share the shape for the product to stay a multiplexor.
template <typename Rng>
ComplexMatrix random_local_move(bool anti, Rng &rng) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    if (anti) {
        m(0, 1) = random_phase(rng);
        m(1, 0) = random_phase(rng);
    } else {
        m(0, 0) = random_phase(rng);
        m(1, 1) = random_phase(rng);
    }
    return m;
}

}  // namespace

TEST(invariants, mux_spectrum_examples) {
    for (int ell = 0; ell < 3; ell++) {
        ASSERT_TRUE(same_multiset(mux_spectrum(ccz_matrix(), ell), {1, 1, 1, -1}));
    }
    ComplexMatrix ccz_i = kron(ccz_matrix(), identity(1));
    ASSERT_TRUE(same_multiset(mux_spectrum(ccz_i, 0), {1, 1, 1, -1, 1, 1, 1, -1}));
    ASSERT_EQ(mux_spectrum(ccz_i, 0).ambient_qubits, 4);
    ASSERT_THROW(mux_spectrum(czsynth::testing::toffoli_matrix(), 2), NotBlockDiagonal);
}

TEST(invariants, ancilla_doubles_spectrum) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; trial++) {
        ComplexMatrix p = direct_sum({random_unitary(4, rng), random_unitary(4, rng)}, {0});
        MuxSpectrum s = mux_spectrum(p, 0);
        std::vector<Complex> doubled = s.values;
        doubled.insert(doubled.end(), s.values.begin(), s.values.end());
        ASSERT_TRUE(same_multiset(mux_spectrum(kron(p, identity(1)), 0), doubled, 1e-7));
    }
}

TEST(invariants, congruent_examples) {
    const Complex i(0, 1);
    auto c = congruent(spectrum_of({1, -1}), spectrum_of({i, -i}));
    ASSERT_TRUE(c.has_value());
    ASSERT_LT(std::min(std::abs(c->lambda - i), std::abs(c->lambda + i)), 1e-12);
    ASSERT_FALSE(congruent(spectrum_of({1, 1, 1, -1}), spectrum_of({1, 1, 1, 1})));
    auto conj = congruent(spectrum_of({i, Complex(std::polar(1.0, 0.3))}), spectrum_of({-i, std::polar(1.0, -0.3)}));
    ASSERT_TRUE(conj.has_value());
    ASSERT_THROW(congruent(spectrum_of({1}), spectrum_of({1, 1})), Error);
}

TEST(invariants, local_cost_class_examples) {
    CostReport ccz = local_cost_class(ccz_matrix(), 0);
    ASSERT_TRUE(ccz.lower_bound);
    ASSERT_EQ(ccz.value_string(), "≥3");
    CostReport ccz_i = local_cost_class(kron(ccz_matrix(), identity(1)), 0);
    ASSERT_FALSE(ccz_i.lower_bound);
    ASSERT_EQ(ccz_i.cost, 2);
    ASSERT_EQ(local_cost_class(cz_matrix(0, 1, 2), 0).cost, 1);
    ASSERT_EQ(local_cost_class(identity(3), 1).cost, 0);
    ASSERT_EQ(local_cost_class(cz_matrix(1, 2, 3), 0).cost, 0);
}

TEST(invariants, phi_construct_spectrum) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int n = 2; n <= 4; n++) {
        std::vector<double> delta((size_t)1 << (n - 2));
        for (auto &d : delta) {
            d = angle(rng);
        }
        Circuit c = phi_construct(delta, 0, 1, n);
        ASSERT_EQ(cz_profile(c).incidences[0], 2);
        std::vector<Complex> expect;
        for (double d : delta) {
            expect.push_back(std::polar(1.0, 2 * d));
            expect.push_back(std::polar(1.0, -2 * d));
        }
        MuxSpectrum s = mux_spectrum(simulate(c), 0);
        ASSERT_TRUE(same_multiset(s, expect, 1e-7));
        ASSERT_LE(local_cost_from_spectrum(s).cost, 2);
    }
    ASSERT_THROW(phi_construct({0.1, 0.2}, 0, 1, 2), Error);
}

TEST(invariants, equivalence_witness_examples) {
    std::mt19937_64 rng(5);
    ComplexMatrix p = direct_sum({random_unitary(4, rng), random_unitary(4, rng)}, {0});
    auto self = equivalence_witness(p, p, 0);
    ASSERT_TRUE(self.has_value());
    ASSERT_LT((self->post() * p * self->pre() - p).norm(), 1e-7);

    auto swap = equivalence_witness(cz_matrix(0, 1, 3), cz_matrix(0, 2, 3), 0);
    ASSERT_TRUE(swap.has_value());
    ASSERT_LT((swap->post() * cz_matrix(0, 1, 3) * swap->pre() - cz_matrix(0, 2, 3)).norm(), 1e-7);

    ASSERT_FALSE(equivalence_witness(identity(3), ccz_matrix(), 0).has_value());
}

TEST(invariants, equivalence_witness_random_moves) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; trial++) {
        int n = 2 + trial % 3;
        int ell = trial % n;
        Eigen::Index half = Eigen::Index{1} << (n - 1);
        ComplexMatrix p = direct_sum({random_unitary(half, rng), random_unitary(half, rng)}, {ell});
        std::vector<int> rest = other_qubits(n, {ell});
        bool anti = trial % 2 == 1;
        ComplexMatrix a = embed(random_local_move(anti, rng), {ell}, n) * embed(random_unitary(half, rng), rest, n);
        ComplexMatrix b = embed(random_local_move(anti, rng), {ell}, n) * embed(random_unitary(half, rng), rest, n);
        ComplexMatrix q = a * p * b;
        auto w = equivalence_witness(p, q, ell);
        ASSERT_TRUE(w.has_value());
        ASSERT_LT((w->post() * p * w->pre() - q).norm(), 1e-7);
    }
}

TEST(invariants, congruence_is_invariant_under_local_moves) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 1000; trial++) {
        int n = 2 + trial % 3;
        int ell = trial % n;
        Eigen::Index half = Eigen::Index{1} << (n - 1);
        ComplexMatrix p = direct_sum({random_unitary(half, rng), random_unitary(half, rng)}, {ell});
        std::vector<int> rest = other_qubits(n, {ell});
        bool anti = trial % 2 == 1;
        ComplexMatrix a = embed(random_local_move(anti, rng), {ell}, n) * embed(random_unitary(half, rng), rest, n);
        ComplexMatrix b = embed(random_local_move(anti, rng), {ell}, n) * embed(random_unitary(half, rng), rest, n);
        ASSERT_TRUE(congruent(mux_spectrum(p, ell), mux_spectrum(a * p * b, ell), 1e-8).has_value());
    }
}

TEST(invariants, partial_det_examples) {
    ASSERT_LT((partial_det(ccz_matrix(), {0, 1}).matrix() - cz_matrix(0, 1, 2)).norm(), 1e-12);
    ComplexMatrix ccz_i = kron(ccz_matrix(), identity(1));
    ASSERT_LT((partial_det(ccz_i, {0, 1}).matrix() - identity(2)).norm(), 1e-12);
    ASSERT_THROW(partial_det(czsynth::testing::toffoli_matrix(), {0, 2}), NotBlockDiagonal);
    // Locking every qubit returns the diagonal itself.
    std::mt19937_64 rng(2);
    DiagonalOperator d = random_diagonal(3, rng);
    ASSERT_LT((partial_det(d.matrix(), {0, 1, 2}).entries - d.entries).norm(), 1e-12);
}

TEST(invariants, is_separable_examples) {
    ASSERT_FALSE(is_separable_diag(diag(cz_matrix(0, 1, 2))).has_value());
    ASSERT_FALSE(is_separable_diag(diag(ccz_matrix())).has_value());
    ASSERT_TRUE(is_separable_diag(DiagonalOperator::identity(3)).has_value());
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; trial++) {
        DiagonalOperator d = czsynth::testing::random_local_diagonal(rng);
        auto f = is_separable_diag(d);
        ASSERT_TRUE(f.has_value());
        ASSERT_LT((f->product().entries - d.entries).norm(), 1e-12);
    }
    ASSERT_THROW(is_separable_diag(DiagonalOperator{1, 0}), ZeroEntry);
}

TEST(invariants, diag_invariant_examples) {
    DiagInvariants ccz = diag_invariants(diag(ccz_matrix()));
    for (auto l : ccz.lambda) {
        ASSERT_LT(std::abs(l - 1.0), 1e-12);
    }
    ASSERT_LT(std::abs(ccz.xi + 1.0), 1e-12);

    // CZ on (0,1) sets the invariant of the pair that excludes qubit 2.
    DiagInvariants cz = diag_invariants(diag(cz_matrix(0, 1, 3)));
    ASSERT_LT(std::abs(cz.lambda[0] - 1.0), 1e-12);
    ASSERT_LT(std::abs(cz.lambda[1] - 1.0), 1e-12);
    ASSERT_LT(std::abs(cz.lambda[2] + 1.0), 1e-12);
    ASSERT_LT(std::abs(cz.xi + 1.0), 1e-12);

    ASSERT_THROW(diag_invariants(DiagonalOperator::identity(2)), Error);
}

TEST(invariants, classify_examples) {
    ASSERT_EQ(classify_3qdiag(DiagonalOperator::identity(3)).cost, 0);
    ASSERT_EQ(classify_3qdiag(diag(cz_matrix(0, 1, 3))).cost, 1);
    ASSERT_EQ(classify_3qdiag(diag(cz_matrix(0, 2, 3))).cost, 1);
    ASSERT_EQ(classify_3qdiag(diag(cz_matrix(1, 2, 3))).cost, 1);
    ASSERT_EQ(classify_3qdiag(diag(cz_matrix(0, 2, 3) * cz_matrix(0, 1, 3))).cost, 2);
    const Complex i(0, 1);
    ASSERT_EQ(classify_3qdiag(DiagonalOperator{1, 1, 1, i, 1, 1, 1, i}).cost, 2);
    CostReport ccz = classify_3qdiag(diag(ccz_matrix()));
    ASSERT_EQ(ccz.cost, 6);
    ASSERT_EQ(ccz.rationale.rfind("case 6", 0), 0u);
}

TEST(invariants, classify_random_patterns) {
    std::mt19937_64 rng(17);
    for (const auto &c : czsynth::testing::cost_cases()) {
        for (int trial = 0; trial < 200; trial++) {
            CostReport r = classify_3qdiag(czsynth::testing::random_diag_for_case(c.label, rng));
            ASSERT_EQ(r.cost, c.cost) << "case " << c.label;
            ASSERT_EQ(r.rationale.rfind(std::string("case ") + c.label + ":", 0), 0u) << r.rationale;
        }
    }
}

TEST(invariants, local_cost_3qdiag_examples) {
    CostReport ccz = local_cost_3qdiag(diag(ccz_matrix()), 0);
    ASSERT_TRUE(ccz.lower_bound);
    ASSERT_EQ(ccz.cost, 3);
    ASSERT_EQ(local_cost_3qdiag(diag(cz_matrix(1, 2, 3)), 0).cost, 0);
    ASSERT_EQ(local_cost_3qdiag(diag(cz_matrix(0, 1, 3)), 0).cost, 1);
    // Both CZs on qubit 0 merge into one after conjugating by a CX on (2,1).
    ASSERT_EQ(local_cost_3qdiag(diag(cz_matrix(0, 1, 3) * cz_matrix(0, 2, 3)), 0).cost, 1);
    const Complex i(0, 1);
    ASSERT_EQ(local_cost_3qdiag(DiagonalOperator{1, 1, 1, 1, 1, 1, i, i}, 0).cost, 2);

    // The diagonal classifier agrees with the spectrum classifier on every qubit.
    std::mt19937_64 rng(23);
    for (const auto &c : czsynth::testing::cost_cases()) {
        for (int trial = 0; trial < 20; trial++) {
            DiagonalOperator d = czsynth::testing::random_diag_for_case(c.label, rng);
            for (int ell = 0; ell < 3; ell++) {
                CostReport a = local_cost_3qdiag(d, ell);
                CostReport b = local_cost_class(d.matrix(), ell);
                ASSERT_EQ(a.value_string(), b.value_string()) << "case " << c.label << " qubit " << ell;
            }
        }
    }
}

TEST(invariants, aud_test_examples) {
    // After one CZ on (0,2) the identity holds; CCZ breaks it.
    ASSERT_TRUE(aud_test(diag(cz_matrix(0, 2, 3))));
    ASSERT_TRUE(aud_test(DiagonalOperator::identity(3)));
    ASSERT_FALSE(aud_test(diag(ccz_matrix())));
}

TEST(invariants, multiplicative_and_locally_invariant) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 1000; trial++) {
        DiagonalOperator a = random_diagonal(3, rng);
        DiagonalOperator b = random_diagonal(3, rng);
        DiagInvariants ab = diag_invariants(a * b);
        DiagInvariants prod = diag_invariants(a) * diag_invariants(b);
        for (int k = 0; k < 3; k++) {
            ASSERT_LT(std::abs(ab.lambda[(size_t)k] - prod.lambda[(size_t)k]), 1e-8);
        }
        ASSERT_LT(std::abs(ab.xi - prod.xi), 1e-8);

        DiagInvariants sa = diag_invariants(a);
        DiagInvariants sl = diag_invariants(a * czsynth::testing::random_local_diagonal(rng));
        for (int k = 0; k < 3; k++) {
            ASSERT_LT(std::abs(sa.lambda[(size_t)k] - sl.lambda[(size_t)k]), 1e-8);
        }
        ASSERT_LT(std::abs(sa.xi - sl.xi), 1e-8);
    }
}

TEST(invariants, unordered_invariants_follow_wire_permutations) {
    std::mt19937_64 rng(31);
    const auto &perms = detail::permutations3();
    for (int trial = 0; trial < 1000; trial++) {
        DiagonalOperator d = random_diagonal(3, rng);
        const auto &p = perms[(size_t)trial % perms.size()];
        DiagonalOperator moved = detail::permute_wires(d, {p[0], p[1], p[2]});
        ASSERT_TRUE(near_lambda_multiset(diag_invariants(d), diag_invariants(moved), 1e-8));
        ASSERT_EQ(classify_3qdiag(d).cost, classify_3qdiag(moved).cost);
    }
}

TEST(invariants, classify_never_exceeds_cz_count) {
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<int> qubit(0, 2);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 1000; trial++) {
        int k = trial % 7;
        Circuit c(3);
        for (int q = 0; q < 3; q++) {
            c.add(Gate::rz(q, angle(rng)));
        }
        for (int j = 0; j < k; j++) {
            int a = qubit(rng), b = (a + 1 + qubit(rng) % 2) % 3;
            c.add(Gate::cz(a, b)).add(Gate::rz(a, angle(rng))).add(Gate::rz(b, angle(rng)));
        }
        CostReport r = classify_3qdiag(DiagonalOperator::from_matrix(simulate(c)));
        ASSERT_LE(r.cost, k);
    }
}
