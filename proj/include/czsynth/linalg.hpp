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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "czsynth/errors.hpp"

namespace czsynth {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr int kMaxQubits = 6;

struct Tolerance {
    double eps = 1e-9;
};

/// Number of qubits for a 2^n dimension; throws if `dim` is not a power of two.
inline int qubits_for_dim(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) {
        n++;
    }
    if ((Eigen::Index{1} << n) != dim || dim < 1) {
        throw Error("dimension " + std::to_string(dim) + " is not a power of two");
    }
    return n;
}

/// Value of `qubit` in basis index `index` of an `n`-qubit register. Qubit 0 is the most significant bit.
inline int bit_of(size_t index, int qubit, int n) {
    return (int)((index >> (n - 1 - qubit)) & 1);
}

/// Packs the listed qubits' bits of `index` into an integer, first listed qubit most significant.
inline size_t gather_bits(size_t index, const std::vector<int> &qubits, int n) {
    size_t out = 0;
    for (int q : qubits) {
        out = (out << 1) | (size_t)bit_of(index, q, n);
    }
    return out;
}

/// Inverse of gather_bits: writes `value`'s bits onto the listed qubits of `index`.
inline size_t scatter_bits(size_t index, size_t value, const std::vector<int> &qubits, int n) {
    int k = (int)qubits.size();
    for (int i = 0; i < k; i++) {
        size_t mask = size_t{1} << (n - 1 - qubits[i]);
        if ((value >> (k - 1 - i)) & 1) {
            index |= mask;
        } else {
            index &= ~mask;
        }
    }
    return index;
}

/// Qubits of an `n`-qubit register not present in `qubits`, ascending.
inline std::vector<int> other_qubits(int n, const std::vector<int> &qubits) {
    std::vector<int> out;
    for (int q = 0; q < n; q++) {
        if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) {
            out.push_back(q);
        }
    }
    return out;
}

inline void check_qubit_list(int n, const std::vector<int> &qubits) {
    for (size_t i = 0; i < qubits.size(); i++) {
        if (qubits[i] < 0 || qubits[i] >= n) {
            throw Error("qubit " + std::to_string(qubits[i]) + " out of range for " + std::to_string(n) + " qubits");
        }
        for (size_t j = 0; j < i; j++) {
            if (qubits[i] == qubits[j]) {
                throw Error("repeated qubit " + std::to_string(qubits[i]));
            }
        }
    }
}

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline ComplexMatrix identity(int n_qubits) {
    Eigen::Index d = Eigen::Index{1} << n_qubits;
    return ComplexMatrix::Identity(d, d);
}

inline bool is_unitary(const ComplexMatrix &m, double tol = 1e-10) {
    if (m.rows() != m.cols()) {
        return false;
    }
    ComplexMatrix e = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
    return e.norm() <= tol;
}

/// A square matrix of power-of-two dimension that was checked to be unitary on construction.
class UnitaryMatrix {
   public:
    UnitaryMatrix() : m_(ComplexMatrix::Identity(1, 1)) {
    }
    explicit UnitaryMatrix(ComplexMatrix m, double tol = 1e-10) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) {
            throw Error("unitary must be square");
        }
        n_ = qubits_for_dim(m_.rows());
        if (n_ > kMaxQubits) {
            throw Error("more than " + std::to_string(kMaxQubits) + " qubits is not supported");
        }
        if (!is_unitary(m_, tol)) {
            throw Error("matrix is not unitary within tolerance");
        }
    }

    const ComplexMatrix &matrix() const {
        return m_;
    }
    operator const ComplexMatrix &() const {
        return m_;
    }
    int n_qubits() const {
        return n_;
    }
    Eigen::Index dim() const {
        return m_.rows();
    }

   private:
    ComplexMatrix m_;
    int n_ = 0;
};

/// A diagonal operator stored as its 2^n diagonal entries.
struct DiagonalOperator {
    ComplexVector entries;

    DiagonalOperator() : entries(ComplexVector::Ones(1)) {
    }
    explicit DiagonalOperator(ComplexVector e) : entries(std::move(e)) {
        qubits_for_dim(entries.size());
    }
    DiagonalOperator(std::initializer_list<Complex> e) : entries(e.size()) {
        Eigen::Index i = 0;
        for (auto v : e) {
            entries[i++] = v;
        }
        qubits_for_dim(entries.size());
    }

    static DiagonalOperator identity(int n_qubits) {
        return DiagonalOperator(ComplexVector::Ones(Eigen::Index{1} << n_qubits));
    }

    /// Extracts the diagonal; throws NotBlockDiagonal when off-diagonal weight exceeds `tol`.
    static DiagonalOperator from_matrix(const ComplexMatrix &m, double tol = 1e-9) {
        ComplexMatrix off = m;
        off.diagonal().setZero();
        if (off.norm() > tol) {
            throw NotBlockDiagonal("operator is not diagonal");
        }
        return DiagonalOperator(ComplexVector(m.diagonal()));
    }

    int n_qubits() const {
        return qubits_for_dim(entries.size());
    }
    Eigen::Index size() const {
        return entries.size();
    }
    Complex operator[](Eigen::Index i) const {
        return entries[i];
    }
    ComplexMatrix matrix() const {
        return entries.asDiagonal();
    }
    DiagonalOperator adjoint() const {
        return DiagonalOperator(ComplexVector(entries.conjugate()));
    }
    DiagonalOperator operator*(const DiagonalOperator &other) const {
        if (other.size() != size()) {
            throw Error("diagonal size mismatch");
        }
        return DiagonalOperator(ComplexVector(entries.cwiseProduct(other.entries)));
    }
};

/// Embeds a k-qubit operator acting on `qubits` (first listed = most significant) into an n-qubit register.
inline ComplexMatrix embed(const ComplexMatrix &op, const std::vector<int> &qubits, int n) {
    check_qubit_list(n, qubits);
    size_t d = size_t{1} << n;
    ComplexMatrix out = ComplexMatrix::Zero((Eigen::Index)d, (Eigen::Index)d);
    for (size_t r = 0; r < d; r++) {
        size_t rs = gather_bits(r, qubits, n);
        for (size_t cs = 0; cs < (size_t{1} << qubits.size()); cs++) {
            size_t c = scatter_bits(r, cs, qubits, n);
            out((Eigen::Index)r, (Eigen::Index)c) = op((Eigen::Index)rs, (Eigen::Index)cs);
        }
    }
    return out;
}

/// Frobenius weight of entries coupling different settings of `qubits`.
inline double off_block_norm(const ComplexMatrix &u, const std::vector<int> &qubits) {
    int n = qubits_for_dim(u.rows());
    double acc = 0;
    for (Eigen::Index r = 0; r < u.rows(); r++) {
        size_t rb = gather_bits((size_t)r, qubits, n);
        for (Eigen::Index c = 0; c < u.cols(); c++) {
            if (gather_bits((size_t)c, qubits, n) != rb) {
                acc += std::norm(u(r, c));
            }
        }
    }
    return std::sqrt(acc);
}

/// The diagonal block <bits|U|bits> where `bits` packs the listed qubits' values (first listed most significant).
inline ComplexMatrix block(const ComplexMatrix &u, const std::vector<int> &qubits, size_t bits, Tolerance tol = {}) {
    int n = qubits_for_dim(u.rows());
    check_qubit_list(n, qubits);
    if (off_block_norm(u, qubits) > tol.eps) {
        throw NotBlockDiagonal("operator does not commute with Z on the requested qubits");
    }
    std::vector<int> rest = other_qubits(n, qubits);
    Eigen::Index d = Eigen::Index{1} << rest.size();
    ComplexMatrix out(d, d);
    for (Eigen::Index r = 0; r < d; r++) {
        size_t ri = scatter_bits(scatter_bits(0, bits, qubits, n), (size_t)r, rest, n);
        for (Eigen::Index c = 0; c < d; c++) {
            size_t ci = scatter_bits(scatter_bits(0, bits, qubits, n), (size_t)c, rest, n);
            out(r, c) = u((Eigen::Index)ri, (Eigen::Index)ci);
        }
    }
    return out;
}

/// Reassembles an operator from its diagonal blocks along `qubits`; inverse of `block`.
inline ComplexMatrix direct_sum(const std::vector<ComplexMatrix> &blocks, const std::vector<int> &qubits) {
    if (blocks.size() != (size_t{1} << qubits.size())) {
        throw Error("direct_sum needs one block per bit setting");
    }
    int rest_n = qubits_for_dim(blocks[0].rows());
    int n = rest_n + (int)qubits.size();
    check_qubit_list(n, qubits);
    std::vector<int> rest = other_qubits(n, qubits);
    Eigen::Index D = Eigen::Index{1} << n;
    ComplexMatrix out = ComplexMatrix::Zero(D, D);
    for (size_t b = 0; b < blocks.size(); b++) {
        for (Eigen::Index r = 0; r < blocks[b].rows(); r++) {
            size_t ri = scatter_bits(scatter_bits(0, b, qubits, n), (size_t)r, rest, n);
            for (Eigen::Index c = 0; c < blocks[b].cols(); c++) {
                size_t ci = scatter_bits(scatter_bits(0, b, qubits, n), (size_t)c, rest, n);
                out((Eigen::Index)ri, (Eigen::Index)ci) = blocks[b](r, c);
            }
        }
    }
    return out;
}

/// Modified Gram-Schmidt on the columns of `m`, in place. Columns that collapse below `tiny` are
/// replaced by basis vectors orthogonal to the previous ones.
inline void orthonormalize_columns(ComplexMatrix &m, double tiny = 1e-7) {
    Eigen::Index rows = m.rows();
    Eigen::Index next_basis = 0;
    for (Eigen::Index j = 0; j < m.cols(); j++) {
        for (int pass = 0; pass < 2; pass++) {
            for (Eigen::Index k = 0; k < j; k++) {
                m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
            }
        }
        double norm = m.col(j).norm();
        while (norm < tiny) {
            if (next_basis >= rows) {
                throw ConvergenceFailure("cannot complete orthonormal basis");
            }
            m.col(j) = ComplexVector::Unit(rows, next_basis++);
            for (int pass = 0; pass < 2; pass++) {
                for (Eigen::Index k = 0; k < j; k++) {
                    m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
                }
            }
            norm = m.col(j).norm();
        }
        m.col(j) /= norm;
    }
}

struct EigResult {
    ComplexVector values;
    ComplexMatrix vectors;
};

/// Eigendecomposition of a unitary (or any normal) matrix: u = V diag(values) V† with V unitary.
///
/// Diagonalizes the Hermitian part first, then separates each cluster of nearly equal real parts
/// using the anti-Hermitian part restricted to that cluster.
inline EigResult unitary_eig(const ComplexMatrix &u, double cluster_gap = 1e-7) {
    if (u.rows() != u.cols()) {
        throw Error("unitary_eig needs a square matrix");
    }
    Eigen::Index d = u.rows();
    ComplexMatrix herm = (u + u.adjoint()) / 2.0;
    ComplexMatrix anti = (u - u.adjoint()) / Complex(0, 2);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> outer(herm);
    if (outer.info() != Eigen::Success) {
        throw ConvergenceFailure("Hermitian eigensolver failed");
    }
    const RealVector &re = outer.eigenvalues();
    ComplexMatrix basis = outer.eigenvectors();
    ComplexMatrix vectors(d, d);

    Eigen::Index start = 0;
    while (start < d) {
        Eigen::Index end = start + 1;
        while (end < d && re[end] - re[end - 1] < cluster_gap) {
            end++;
        }
        Eigen::Index w = end - start;
        ComplexMatrix sub = basis.middleCols(start, w);
        if (w == 1) {
            vectors.col(start) = sub.col(0);
        } else {
            ComplexMatrix inner_op = sub.adjoint() * anti * sub;
            inner_op = (inner_op + inner_op.adjoint()).eval() / 2.0;
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> inner(inner_op);
            if (inner.info() != Eigen::Success) {
                throw ConvergenceFailure("Hermitian eigensolver failed inside cluster");
            }
            vectors.middleCols(start, w) = sub * inner.eigenvectors();
        }
        start = end;
    }
    orthonormalize_columns(vectors);

    EigResult out;
    out.values.resize(d);
    for (Eigen::Index j = 0; j < d; j++) {
        out.values[j] = vectors.col(j).dot(u * vectors.col(j));
    }
    out.vectors = std::move(vectors);
    double err = (out.vectors * out.values.asDiagonal() * out.vectors.adjoint() - u).norm();
    if (!(err < 1e-8 * std::max<double>(1.0, std::sqrt((double)d)))) {
        throw ConvergenceFailure("eigendecomposition residual " + std::to_string(err) + " above tolerance");
    }
    return out;
}

struct SvdResult {
    ComplexMatrix left;
    RealVector sigma;
    ComplexMatrix right;
};

/// m = left · diag(sigma) · right†, sigma descending.
inline SvdResult svd(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) {
        throw Error("svd needs a square matrix");
    }
    Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdResult out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
    double err = (out.left * out.sigma.asDiagonal() * out.right.adjoint() - m).norm();
    if (!(err < 1e-9 * std::max(1.0, m.norm()))) {
        throw ConvergenceFailure("svd residual above tolerance");
    }
    return out;
}

/// min over φ of ‖a − e^{iφ} b‖_F.
inline double dist_phase(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error("dist_phase dimension mismatch");
    }
    Complex overlap = (b.adjoint() * a).trace();
    Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1, 0);
    return (a - phase * b).norm();
}

/// min ‖a − D·b‖_F over unitary diagonals D acting on `qubits` only. An empty list gives dist_phase.
inline double dist_up_to_diagonal(const ComplexMatrix &a, const ComplexMatrix &b, const std::vector<int> &qubits) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw Error("dist_up_to_diagonal dimension mismatch");
    }
    int n = qubits_for_dim(a.rows());
    check_qubit_list(n, qubits);
    ComplexMatrix m = a * b.adjoint();
    std::vector<Complex> traces(size_t{1} << qubits.size());
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        traces[gather_bits((size_t)i, qubits, n)] += m(i, i);
    }
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        Complex t = traces[gather_bits((size_t)i, qubits, n)];
        m(i, i) -= std::abs(t) > 0 ? t / std::abs(t) : Complex(1, 0);
    }
    return m.norm();
}

/// Haar-random unitary via QR of a complex Gaussian matrix with phase-corrected R.
template <typename Rng>
ComplexMatrix random_unitary(Eigen::Index dim, Rng &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix z(dim, dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        for (Eigen::Index j = 0; j < dim; j++) {
            z(i, j) = Complex(g(rng), g(rng));
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; j++) {
        Complex rd = r(j, j);
        if (std::abs(rd) > 0) {
            q.col(j) *= rd / std::abs(rd);
        }
    }
    return q;
}

template <typename Rng>
Complex random_phase(Rng &rng) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    return std::polar(1.0, u(rng));
}

template <typename Rng>
DiagonalOperator random_diagonal(int n_qubits, Rng &rng) {
    ComplexVector e(Eigen::Index{1} << n_qubits);
    for (Eigen::Index i = 0; i < e.size(); i++) {
        e[i] = random_phase(rng);
    }
    return DiagonalOperator(std::move(e));
}

/// Principal square root with the phase halved into (−π/2, π/2].
inline Complex principal_sqrt(Complex z) {
    return std::polar(std::sqrt(std::abs(z)), std::arg(z) / 2);
}

/// Normalizes a nonzero complex number to unit modulus.
inline Complex unit(Complex z) {
    return z / std::abs(z);
}

}  // namespace czsynth
