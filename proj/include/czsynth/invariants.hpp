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
#include <string>
#include <vector>

#include "czsynth/circuit.hpp"
#include "czsynth/decomp.hpp"
#include "czsynth/linalg.hpp"
#include "czsynth/separable.hpp"

namespace czsynth {

/// Eigenvalues of U1†·U0, where U0 and U1 are the blocks of an operator selected by one qubit.
struct MuxSpectrum {
    std::vector<Complex> values;
    int ambient_qubits = 0;

    size_t size() const {
        return values.size();
    }
};

inline MuxSpectrum mux_spectrum(const ComplexMatrix &u, int ell, Tolerance tol = {}) {
    int n = qubits_for_dim(u.rows());
    check_qubit_list(n, {ell});
    ComplexMatrix u0 = block(u, {ell}, 0, tol);
    ComplexMatrix u1 = block(u, {ell}, 1, tol);
    EigResult e = unitary_eig(u1.adjoint() * u0);
    MuxSpectrum out;
    out.ambient_qubits = n;
    for (Eigen::Index i = 0; i < e.values.size(); i++) {
        out.values.push_back(e.values[i]);
    }
    return out;
}

/// Pairs every element of `a` with a distinct element of `b` within `tol`. Returns the
/// assignment (index into b for each element of a) or nullopt.
inline std::optional<std::vector<size_t>> match_multisets(const std::vector<Complex> &a, const std::vector<Complex> &b,
                                                          double tol = 1e-7) {
    if (a.size() != b.size()) {
        return std::nullopt;
    }
    std::vector<bool> used(b.size(), false);
    std::vector<size_t> out(a.size());
    for (size_t i = 0; i < a.size(); i++) {
        size_t best = b.size();
        double best_d = tol;
        for (size_t j = 0; j < b.size(); j++) {
            double d = std::abs(a[i] - b[j]);
            if (!used[j] && d <= best_d) {
                best = j;
                best_d = d;
            }
        }
        if (best == b.size()) {
            return std::nullopt;
        }
        used[best] = true;
        out[i] = best;
    }
    return out;
}

struct Congruence {
    Complex lambda{1, 0};
    bool conjugate = false;
};

/// Decides whether λ·s = t or λ·s = t† for some unit scalar λ. Candidates are t_0/s_i.
inline std::optional<Congruence> congruent(const MuxSpectrum &s, const MuxSpectrum &t, double tol = 1e-7) {
    if (s.size() != t.size()) {
        throw Error("congruence needs spectra of equal size");
    }
    if (s.size() == 0) {
        return Congruence{};
    }
    for (bool conj : {false, true}) {
        std::vector<Complex> target = t.values;
        if (conj) {
            for (auto &v : target) {
                v = std::conj(v);
            }
        }
        for (const auto &si : s.values) {
            Complex lambda = unit(target[0] / si);
            std::vector<Complex> scaled;
            for (const auto &v : s.values) {
                scaled.push_back(lambda * v);
            }
            if (match_multisets(scaled, target, tol)) {
                return Congruence{lambda, conj};
            }
        }
    }
    return std::nullopt;
}

/// Exact cost, or a lower-bound category when `lower_bound` is set (then `cost` is the bound).
struct CostReport {
    int cost = 0;
    bool lower_bound = false;
    std::string rationale;
    std::optional<Circuit> witness;

    std::string value_string() const {
        return lower_bound ? "≥" + std::to_string(cost) : std::to_string(cost);
    }
};

namespace detail {

inline bool all_equal(const std::vector<Complex> &v, double tol) {
    for (const auto &x : v) {
        if (std::abs(x - v[0]) > tol) {
            return false;
        }
    }
    return true;
}

/// True when the multiset splits into pairs {z, z̄}; elements on the real axis pair with equals.
inline bool conjugate_pairable(std::vector<Complex> v, double tol) {
    std::vector<bool> used(v.size(), false);
    for (size_t i = 0; i < v.size(); i++) {
        if (used[i]) {
            continue;
        }
        used[i] = true;
        size_t best = v.size();
        double best_d = tol;
        for (size_t j = i + 1; j < v.size(); j++) {
            double d = std::abs(v[j] - std::conj(v[i]));
            if (!used[j] && d <= best_d) {
                best = j;
                best_d = d;
            }
        }
        if (best == v.size()) {
            return false;
        }
        used[best] = true;
    }
    return true;
}

}  // namespace detail

/// Local CZ-cost class of a spectrum: 0, 1, 2, or "≥3".
inline CostReport local_cost_from_spectrum(const MuxSpectrum &s, double tol = 1e-7) {
    CostReport r;
    if (detail::all_equal(s.values, tol)) {
        r.cost = 0;
        r.rationale = "spectrum congruent to all ones";
        return r;
    }
    MuxSpectrum balanced;
    for (size_t i = 0; i < s.size(); i++) {
        balanced.values.push_back(i % 2 ? Complex(-1, 0) : Complex(1, 0));
    }
    if (s.size() % 2 == 0 && congruent(s, balanced, tol)) {
        r.cost = 1;
        r.rationale = "spectrum congruent to balanced {1,-1,...}";
        return r;
    }
    double theta0 = std::arg(s.values[0]);
    for (const auto &vj : s.values) {
        double phi = (theta0 + std::arg(vj)) / 2;
        for (double shift : {0.0, kPi}) {
            Complex rot = std::polar(1.0, -(phi + shift));
            std::vector<Complex> rotated;
            for (const auto &v : s.values) {
                rotated.push_back(rot * v);
            }
            if (detail::conjugate_pairable(rotated, tol)) {
                r.cost = 2;
                r.rationale = "spectrum congruent to a multiset of conjugate pairs";
                return r;
            }
        }
    }
    r.cost = 3;
    r.lower_bound = true;
    r.rationale = "spectrum not congruent to any multiset of conjugate pairs";
    return r;
}

/// Minimum number of CZ gates touching qubit `ell` in any circuit for `u`, as a class.
inline CostReport local_cost_class(const ComplexMatrix &u, int ell, Tolerance tol = {}) {
    return local_cost_from_spectrum(mux_spectrum(u, ell, tol));
}

/// CZ(ell, m) · multiplexed RY(delta) on m over the remaining qubits · CZ(ell, m).
/// Its mux-spectrum on `ell` is {e^{±2iδ_j}}.
inline Circuit phi_construct(const std::vector<double> &delta, int ell, int m, int n) {
    check_qubit_list(n, {ell, m});
    std::vector<int> bus;
    for (int q = 0; q < n; q++) {
        if (q != ell && q != m) {
            bus.push_back(q);
        }
    }
    if (delta.size() != (size_t{1} << bus.size())) {
        throw Error("phi_construct needs 2^(N-2) angles");
    }
    Circuit out(n);
    out.add(Gate::cz(ell, m));
    Circuit ry = bus.empty() ? Circuit(n, {Gate::ry(m, delta[0])})
                             : mux_ry_synth(mux_rz_synth(delta, m, bus, n), m);
    out.append(ry);
    out.add(Gate::cz(ell, m));
    return out;
}

/// Witness that Q = (post_local ⊗ post_rest) · P · (pre_local ⊗ pre_rest), with the local
/// factors acting on qubit `ell` and the rest factors on every other qubit.
struct EquivalenceWitness {
    int ell = 0;
    int n = 0;
    ComplexMatrix pre_local;
    ComplexMatrix pre_rest;
    ComplexMatrix post_local;
    ComplexMatrix post_rest;
    Complex lambda{1, 0};
    bool conjugate = false;

    ComplexMatrix pre() const {
        return embed(pre_local, {ell}, n) * embed(pre_rest, other_qubits(n, {ell}), n);
    }
    ComplexMatrix post() const {
        return embed(post_local, {ell}, n) * embed(post_rest, other_qubits(n, {ell}), n);
    }
};

/// Constructs operators relating P and Q when their mux-spectra on `ell` are congruent.
inline std::optional<EquivalenceWitness> equivalence_witness(const ComplexMatrix &p, const ComplexMatrix &q, int ell) {
    int n = qubits_for_dim(p.rows());
    if (q.rows() != p.rows()) {
        throw Error("equivalence_witness needs operators of equal size");
    }
    MuxSpectrum sp = mux_spectrum(p, ell, Tolerance{1e-8});
    MuxSpectrum sq = mux_spectrum(q, ell, Tolerance{1e-8});
    auto cong = congruent(sp, sq);
    if (!cong) {
        return std::nullopt;
    }
    EquivalenceWitness w;
    w.ell = ell;
    w.n = n;
    w.lambda = cong->lambda;
    w.conjugate = cong->conjugate;

    // Spectrum of X·P·X is the conjugate; RZ(μ)·P scales it by e^{2iμ}.
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    ComplexMatrix local_pre = ComplexMatrix::Identity(2, 2);
    ComplexMatrix local_post = ComplexMatrix::Identity(2, 2);
    Complex scale = cong->lambda;
    if (cong->conjugate) {
        local_pre = x;
        local_post = x;
        scale = std::conj(scale);
    }
    double mu = std::arg(scale) / 2;
    local_post = (Gate::rz(0, mu).matrix() * local_post).eval();
    ComplexMatrix p2 = embed(local_post, {ell}, n) * p * embed(local_pre, {ell}, n);

    DemuxResult dp = demux(p2, ell);
    DemuxResult dq = demux(q, ell);
    size_t h = dp.delta.size();
    std::vector<Complex> sq2, sp2;
    for (size_t i = 0; i < h; i++) {
        sp2.push_back(std::polar(1.0, 2 * dp.delta[i]));
        sq2.push_back(std::polar(1.0, 2 * dq.delta[i]));
    }
    auto perm = match_multisets(sp2, sq2, 1e-6);
    if (!perm) {
        return std::nullopt;
    }
    ComplexMatrix pi = ComplexMatrix::Zero((Eigen::Index)h, (Eigen::Index)h);
    ComplexMatrix k = ComplexMatrix::Zero((Eigen::Index)h, (Eigen::Index)h);
    for (size_t i = 0; i < h; i++) {
        auto j = (Eigen::Index)(*perm)[i];
        pi(j, (Eigen::Index)i) = 1;
        k(j, (Eigen::Index)i) = std::polar(1.0, dp.delta[i] - dq.delta[(size_t)j]);
    }
    w.pre_local = local_pre;
    w.post_local = local_post;
    w.post_rest = dq.m * k * dp.m.adjoint();
    w.pre_rest = dp.n.adjoint() * pi.adjoint() * dq.n;
    double err = (w.post() * p * w.pre() - q).norm();
    if (!(err < 1e-7 * std::sqrt((double)p.rows()))) {
        throw ConvergenceFailure("equivalence witness residual " + std::to_string(err));
    }
    return w;
}

/// The four quotient invariants of a three-qubit diagonal. lambda[q] belongs to the qubit pair
/// that excludes q, so lambda[0] is the (1,2) invariant.
struct DiagInvariants {
    std::array<Complex, 3> lambda{Complex(1), Complex(1), Complex(1)};
    Complex xi{1, 0};

    DiagInvariants operator*(const DiagInvariants &o) const {
        DiagInvariants r;
        for (size_t i = 0; i < 3; i++) {
            r.lambda[i] = lambda[i] * o.lambda[i];
        }
        r.xi = xi * o.xi;
        return r;
    }
};

inline DiagInvariants diag_invariants(const DiagonalOperator &d) {
    if (d.size() != 8) {
        throw Error("diag_invariants needs a three-qubit diagonal");
    }
    require_nonzero(d);
    DiagInvariants s;
    s.lambda[0] = d[3] * d[0] / (d[1] * d[2]);
    s.lambda[1] = d[5] * d[0] / (d[4] * d[1]);
    s.lambda[2] = d[6] * d[0] / (d[4] * d[2]);
    s.xi = d[7] * d[0] * d[0] / (d[4] * d[2] * d[1]);
    return s;
}

/// diag(1,1,1,λ1,1,λ2,λ3,ξ): the representative with the given invariants.
inline DiagonalOperator normal_form(const DiagInvariants &s) {
    return DiagonalOperator{1, 1, 1, s.lambda[0], 1, s.lambda[1], s.lambda[2], s.xi};
}

namespace detail {

inline bool near(Complex a, Complex b, double tol = 1e-8) {
    return std::abs(a - b) <= tol;
}

inline const std::array<std::array<int, 3>, 6> &permutations3() {
    static const std::array<std::array<int, 3>, 6> p = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    return p;
}

}  // namespace detail

/// Exact CZ-cost of a three-qubit diagonal, tested in increasing order of cost.
inline CostReport classify_3qdiag(const DiagonalOperator &d, double tol = 1e-8) {
    DiagInvariants s = diag_invariants(d);
    const Complex one(1, 0), neg(-1, 0);
    const Complex xi = s.xi;
    auto any_perm = [&](auto pred) {
        for (const auto &p : detail::permutations3()) {
            if (pred(s.lambda[(size_t)p[0]], s.lambda[(size_t)p[1]], s.lambda[(size_t)p[2]])) {
                return true;
            }
        }
        return false;
    };
    using detail::near;
    CostReport r;
    if (any_perm([&](Complex a, Complex b, Complex c) {
            return near(a, one, tol) && near(b, one, tol) && near(c, one, tol) && near(xi, one, tol);
        })) {
        r.cost = 0;
        r.rationale = "case 0: s = (1,1,1;1)";
        return r;
    }
    if (any_perm([&](Complex a, Complex b, Complex c) {
            return near(a, one, tol) && near(b, one, tol) && near(c, neg, tol) && near(xi, neg, tol);
        })) {
        r.cost = 1;
        r.rationale = "case 1: s = (1,1,-1;-1)";
        return r;
    }
    if (any_perm([&](Complex a, Complex b, Complex c) {
            return near(a, xi, tol) && near(b, one, tol) && near(c, one, tol);
        })) {
        r.cost = 2;
        r.rationale = "case 2a: s = (x,1,1;x)";
        return r;
    }
    if (any_perm([&](Complex a, Complex b, Complex c) {
            return near(a, one, tol) && near(b, neg, tol) && near(c, neg, tol) && near(xi, one, tol);
        })) {
        r.cost = 2;
        r.rationale = "case 2b: s = (1,-1,-1;1)";
        return r;
    }
    if (any_perm([&](Complex a, Complex b, Complex c) {
            return near(a, xi, tol) && near(b, neg, tol) && near(c, neg, tol);
        })) {
        r.cost = 3;
        r.rationale = "case 3b: s = (x,-1,-1;x)";
        return r;
    }
    if (any_perm([&](Complex a, Complex b, Complex c) {
            return near(a, -xi, tol) && near(b, one, tol) && near(c, neg, tol);
        })) {
        r.cost = 3;
        r.rationale = "case 3c: s = (-x,1,-1;x)";
        return r;
    }
    if (any_perm([&](Complex a, Complex b, Complex c) { return near(xi * c, a * b, tol); })) {
        r.cost = 4;
        r.rationale = "case 4: xi * lambda_k = lambda_i * lambda_j";
        return r;
    }
    if (near(xi, s.lambda[0] * s.lambda[1] * s.lambda[2], tol)) {
        r.cost = 5;
        r.rationale = "case 5b: xi = lambda_1 * lambda_2 * lambda_3";
        return r;
    }
    r.cost = 6;
    r.rationale = "case 6: generic three-qubit diagonal";
    return r;
}

/// Minimum number of CZ gates touching qubit `ell` in a three-qubit circuit for `d`.
inline CostReport local_cost_3qdiag(const DiagonalOperator &d, int ell, double tol = 1e-8) {
    check_qubit_list(3, {ell});
    DiagInvariants s = diag_invariants(d);
    std::vector<int> others = other_qubits(3, {ell});
    Complex l = s.lambda[(size_t)ell];
    Complex a = s.lambda[(size_t)others[0]];
    Complex b = s.lambda[(size_t)others[1]];
    Complex xi = s.xi;
    using detail::near;
    CostReport r;
    if (near(a, 1, tol) && near(b, 1, tol) && near(l, xi, tol)) {
        r.cost = 0;
        r.rationale = "S = (xi,1,1;xi)";
        return r;
    }
    if ((near(l, xi, tol) && near(a, -1.0, tol) && near(b, -1.0, tol)) ||
        (near(l, -xi, tol) && near(a, 1, tol) && near(b, -1.0, tol)) ||
        (near(l, -xi, tol) && near(a, -1.0, tol) && near(b, 1, tol))) {
        r.cost = 1;
        r.rationale = "S in {(xi,-1,-1;xi), (-xi,1,-1;xi), (-xi,-1,1;xi)}";
        return r;
    }
    if (near(xi, l * a * b, tol) || near(xi, l * a / b, tol) || near(xi, l * b / a, tol)) {
        r.cost = 2;
        r.rationale = "xi in {l*a*b, l*a/b, l*b/a}";
        return r;
    }
    r.cost = 3;
    r.lower_bound = true;
    r.rationale = "no invariant pattern with at most two touching CZs";
    return r;
}

/// The identity λ1·λ2 = λ3·ξ, necessary for a one-CZ local cost after a CZ on qubits (0,2).
inline bool aud_test(const DiagonalOperator &d, double tol = 1e-8) {
    DiagInvariants s = diag_invariants(d);
    return detail::near(s.lambda[0] * s.lambda[1], s.lambda[2] * s.xi, tol);
}

}  // namespace czsynth
