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

#include "czsynth/linalg.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace czsynth;
using czsynth::testing::ccz_matrix;
using czsynth::testing::cz_matrix;

namespace {

ComplexMatrix diag2(Complex a, Complex b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

ComplexMatrix hadamard() {
    ComplexMatrix m(2, 2);
    m << 1, 1, 1, -1;
    return m / std::sqrt(2.0);
}

}  // namespace

TEST(linalg, kron_examples) {
    ASSERT_EQ(kron(identity(1), identity(1)), identity(2));
    ComplexMatrix z = diag2(1, -1);
    ComplexMatrix zz = kron(z, z);
    ComplexVector expect(4);
    expect << 1, -1, -1, 1;
    ASSERT_EQ(ComplexVector(zz.diagonal()), expect);
    ASSERT_TRUE(zz.isDiagonal());

    ComplexMatrix got = kron(diag2(1, Complex(0, 1)), diag2(1, -1));
    expect << 1, -1, Complex(0, 1), Complex(0, -1);
    ASSERT_EQ(ComplexVector(got.diagonal()), expect);
    ASSERT_TRUE(got.isDiagonal());
}

TEST(linalg, bit_helpers_use_qubit0_as_msb) {
    ASSERT_EQ(bit_of(4, 0, 3), 1);
    ASSERT_EQ(bit_of(4, 2, 3), 0);
    ASSERT_EQ(gather_bits(0b101, {2, 0}, 3), 0b11u);
    ASSERT_EQ(scatter_bits(0, 0b10, {1, 2}, 3), 0b010u);
    ASSERT_EQ(other_qubits(4, {2, 0}), (std::vector<int>{1, 3}));
}

TEST(linalg, block_examples) {
    ComplexMatrix ccz = ccz_matrix();
    ASSERT_TRUE(block(ccz, {0}, 1).isApprox(cz_matrix(0, 1, 2)));
    ASSERT_TRUE(block(ccz, {0}, 0).isApprox(identity(2)));

    ComplexMatrix cz01 = kron(cz_matrix(0, 1, 2), identity(1));
    ASSERT_TRUE(block(cz01, {0, 1}, 0b11).isApprox(-identity(1)));
}

TEST(linalg, block_rejects_non_commuting) {
    ComplexMatrix h3 = kron(hadamard(), identity(2));
    ASSERT_THROW(block(h3, {0}, 0), NotBlockDiagonal);
    ASSERT_NO_THROW(block(h3, {1}, 0));
}

TEST(linalg, block_then_direct_sum_reproduces) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; trial++) {
        std::vector<int> qubits = trial % 2 ? std::vector<int>{2, 0} : std::vector<int>{1};
        std::vector<ComplexMatrix> parts;
        int rest = 4 - (int)qubits.size();
        for (size_t b = 0; b < (size_t{1} << qubits.size()); b++) {
            parts.push_back(random_unitary(Eigen::Index{1} << rest, rng));
        }
        ComplexMatrix u = direct_sum(parts, qubits);
        ASSERT_TRUE(is_unitary(u));
        for (size_t b = 0; b < parts.size(); b++) {
            ASSERT_EQ(block(u, qubits, b), parts[b]);
        }
        std::vector<ComplexMatrix> again;
        for (size_t b = 0; b < parts.size(); b++) {
            again.push_back(block(u, qubits, b));
        }
        ASSERT_EQ(direct_sum(again, qubits), u);
    }
}

TEST(linalg, embed_matches_kron) {
    std::mt19937_64 rng(3);
    ComplexMatrix a = random_unitary(2, rng);
    ComplexMatrix b = random_unitary(4, rng);
    ASSERT_TRUE(embed(a, {0}, 3).isApprox(kron(a, identity(2))));
    ASSERT_TRUE(embed(a, {2}, 3).isApprox(kron(identity(2), a)));
    ASSERT_TRUE(embed(b, {0, 1}, 3).isApprox(kron(b, identity(1))));
    // Listing qubits in reverse order swaps the operator's tensor factors.
    ComplexMatrix c = random_unitary(2, rng);
    ASSERT_TRUE(embed(kron(a, c), {1, 0}, 2).isApprox(kron(c, a)));
}

TEST(linalg, unitary_eig_examples) {
    auto z = unitary_eig(diag2(1, -1));
    std::vector<double> re = {z.values[0].real(), z.values[1].real()};
    std::sort(re.begin(), re.end());
    ASSERT_NEAR(re[0], -1, 1e-12);
    ASSERT_NEAR(re[1], 1, 1e-12);

    auto h = unitary_eig(hadamard());
    re = {h.values[0].real(), h.values[1].real()};
    std::sort(re.begin(), re.end());
    ASSERT_NEAR(re[0], -1, 1e-12);
    ASSERT_NEAR(re[1], 1, 1e-12);
    ASSERT_NEAR(std::abs(h.values[0].imag()) + std::abs(h.values[1].imag()), 0, 1e-12);
}

TEST(linalg, unitary_eig_roundtrip_random) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 400; trial++) {
        Eigen::Index d = Eigen::Index{2} << (trial % 4);
        ComplexMatrix u = random_unitary(d, rng);
        auto e = unitary_eig(u);
        ASSERT_LT((e.vectors * e.values.asDiagonal() * e.vectors.adjoint() - u).norm(), 1e-8);
        ASSERT_TRUE(is_unitary(e.vectors, 1e-8));
        for (Eigen::Index i = 0; i < d; i++) {
            ASSERT_NEAR(std::abs(e.values[i]), 1.0, 1e-8);
        }
    }
}

TEST(linalg, unitary_eig_degenerate_spectra) {
    // Conjugate pairs share a real part; exact repeats form larger clusters.
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; trial++) {
        ComplexMatrix v = random_unitary(8, rng);
        ComplexVector lam(8);
        Complex a = random_phase(rng);
        lam << a, std::conj(a), a, 1, 1, -1, Complex(0, 1), Complex(0, -1);
        if (trial % 3 == 0) {
            lam[3] = std::polar(1.0, 1e-5);
            lam[4] = std::polar(1.0, -1e-5);
        }
        ComplexMatrix u = v * lam.asDiagonal() * v.adjoint();
        auto e = unitary_eig(u);
        ASSERT_LT((e.vectors * e.values.asDiagonal() * e.vectors.adjoint() - u).norm(), 1e-8);
        ASSERT_TRUE(is_unitary(e.vectors, 1e-8));
    }
    auto id = unitary_eig(identity(3));
    ASSERT_TRUE(id.values.isApprox(ComplexVector::Ones(8)));
}

TEST(linalg, svd_examples) {
    auto s = svd(identity(2));
    ASSERT_TRUE(s.sigma.isApprox(RealVector::Ones(4)));
    ASSERT_LT((s.left * s.right.adjoint() - identity(2)).norm(), 1e-12);

    auto c = svd(diag2(0.6, 0.8));
    ASSERT_NEAR(c.sigma[0], 0.8, 1e-14);
    ASSERT_NEAR(c.sigma[1], 0.6, 1e-14);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; trial++) {
        ComplexMatrix m = random_unitary(4, rng) * Complex(0.3, 0) + random_unitary(4, rng);
        auto r = svd(m);
        ASSERT_LT((r.left * r.sigma.asDiagonal() * r.right.adjoint() - m).norm(), 1e-9);
        for (Eigen::Index i = 1; i < r.sigma.size(); i++) {
            ASSERT_GE(r.sigma[i - 1], r.sigma[i]);
        }
        ASSERT_GE(r.sigma[3], 0);
    }
}

TEST(linalg, dist_phase_examples) {
    std::mt19937_64 rng(1);
    ComplexMatrix u = random_unitary(4, rng);
    ASSERT_NEAR(dist_phase(u, u), 0, 1e-14);
    ASSERT_NEAR(dist_phase(u, std::polar(1.0, kPi / 7) * u), 0, 1e-14);
    ASSERT_NEAR(dist_phase(identity(1), diag2(1, -1)), 2, 1e-14);
}

TEST(linalg, dist_phase_is_pseudometric) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 500; trial++) {
        ComplexMatrix a = random_unitary(4, rng);
        ComplexMatrix b = random_unitary(4, rng);
        ComplexMatrix c = random_unitary(4, rng);
        ASSERT_NEAR(dist_phase(a, b), dist_phase(b, a), 1e-12);
        ASSERT_LE(dist_phase(a, c), dist_phase(a, b) + dist_phase(b, c) + 1e-12);
        ASSERT_NEAR(dist_phase(a, random_phase(rng) * a), 0, 1e-12);
    }
}

TEST(linalg, unitary_matrix_validates) {
    ASSERT_NO_THROW(UnitaryMatrix(identity(2)));
    ASSERT_THROW(UnitaryMatrix(ComplexMatrix::Identity(3, 3)), Error);
    ASSERT_THROW(UnitaryMatrix(ComplexMatrix(2 * identity(1))), Error);
    ASSERT_EQ(UnitaryMatrix(identity(3)).n_qubits(), 3);
}

TEST(linalg, diagonal_operator) {
    DiagonalOperator d{1, Complex(0, 1), -1, 1};
    ASSERT_EQ(d.n_qubits(), 2);
    ASSERT_TRUE((d * d.adjoint()).entries.isApprox(ComplexVector::Ones(4)));
    ASSERT_THROW(DiagonalOperator::from_matrix(kron(hadamard(), identity(1))), NotBlockDiagonal);
    ASSERT_EQ(DiagonalOperator::from_matrix(d.matrix()).entries, d.entries);
    ASSERT_THROW(DiagonalOperator({1, 1, 1}), Error);
}
