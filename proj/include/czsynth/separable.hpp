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

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "czsynth/linalg.hpp"

namespace czsynth {

/// Diagonal with entry j equal to det(U_j), where U_j is the block of `u` selected by the
/// bits j of the locked qubits.
inline DiagonalOperator partial_det(const ComplexMatrix &u, const std::vector<int> &locked, Tolerance tol = {}) {
    int n = qubits_for_dim(u.rows());
    check_qubit_list(n, locked);
    if (off_block_norm(u, locked) > tol.eps) {
        throw NotBlockDiagonal("operator does not commute with Z on the locked qubits");
    }
    ComplexVector out(Eigen::Index{1} << locked.size());
    for (Eigen::Index j = 0; j < out.size(); j++) {
        out[j] = block(u, locked, (size_t)j, tol).determinant();
    }
    return DiagonalOperator(std::move(out));
}

/// One-qubit diagonal factors of a separable diagonal operator. factors[q] holds the two
/// entries for qubit q; the global scalar lives in factors[0].
struct SeparableFactors {
    std::vector<std::array<Complex, 2>> factors;

    DiagonalOperator product() const {
        DiagonalOperator d;
        for (const auto &f : factors) {
            ComplexVector v(2);
            v << f[0], f[1];
            d = DiagonalOperator(ComplexVector(kron(d.entries, v)));
        }
        return d;
    }
};

inline void require_nonzero(const DiagonalOperator &d, double floor = 1e-12) {
    for (Eigen::Index i = 0; i < d.size(); i++) {
        if (std::abs(d[i]) < floor) {
            throw ZeroEntry("diagonal entry " + std::to_string(i) + " is zero");
        }
    }
}

/// Tests whether a diagonal operator is a tensor product of one-qubit diagonals by checking
/// D_{11}·D_{00} = D_{10}·D_{01} on every qubit pair and every setting of the other bits.
inline std::optional<SeparableFactors> is_separable_diag(const DiagonalOperator &d, double tol = 1e-8) {
    require_nonzero(d);
    int n = d.n_qubits();
    size_t dim = (size_t)d.size();
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            size_t mi = size_t{1} << (n - 1 - i);
            size_t mj = size_t{1} << (n - 1 - j);
            for (size_t base = 0; base < dim; base++) {
                if (base & (mi | mj)) {
                    continue;
                }
                Complex a = d[(Eigen::Index)(base | mi | mj)] * d[(Eigen::Index)base];
                Complex b = d[(Eigen::Index)(base | mi)] * d[(Eigen::Index)(base | mj)];
                if (std::abs(a - b) > tol * std::max(std::abs(a), std::abs(b))) {
                    return std::nullopt;
                }
            }
        }
    }
    SeparableFactors out;
    Complex d0 = d[0];
    for (int q = 0; q < n; q++) {
        Complex ratio = d[(Eigen::Index)(size_t{1} << (n - 1 - q))] / d0;
        if (q == 0) {
            out.factors.push_back({d0, d0 * ratio});
        } else {
            out.factors.push_back({Complex(1, 0), ratio});
        }
    }
    return out;
}

}  // namespace czsynth
