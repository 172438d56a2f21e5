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

#include <bit>
#include <vector>

#include "czsynth/circuit.hpp"
#include "czsynth/linalg.hpp"
#include "czsynth/separable.hpp"

namespace czsynth {

/// Sub-matrix of rows with qubit `ell` equal to `a` and columns with it equal to `b`.
inline ComplexMatrix quadrant(const ComplexMatrix &u, int ell, int a, int b) {
    int n = qubits_for_dim(u.rows());
    std::vector<int> rest = other_qubits(n, {ell});
    Eigen::Index h = u.rows() / 2;
    ComplexMatrix out(h, h);
    for (Eigen::Index r = 0; r < h; r++) {
        size_t ri = scatter_bits(scatter_bits(0, (size_t)a, {ell}, n), (size_t)r, rest, n);
        for (Eigen::Index c = 0; c < h; c++) {
            size_t ci = scatter_bits(scatter_bits(0, (size_t)b, {ell}, n), (size_t)c, rest, n);
            out(r, c) = u((Eigen::Index)ri, (Eigen::Index)ci);
        }
    }
    return out;
}

/// Multiplexed RY on `ell`: for each setting j of the other qubits, the 2×2 block
/// [[cos θ_j, sin θ_j], [−sin θ_j, cos θ_j]].
inline ComplexMatrix mux_ry_matrix(const std::vector<double> &thetas, int ell, int n) {
    std::vector<int> rest = other_qubits(n, {ell});
    ComplexMatrix out = ComplexMatrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (size_t j = 0; j < thetas.size(); j++) {
        auto i0 = (Eigen::Index)scatter_bits(scatter_bits(0, 0, {ell}, n), j, rest, n);
        auto i1 = (Eigen::Index)scatter_bits(scatter_bits(0, 1, {ell}, n), j, rest, n);
        double c = std::cos(thetas[j]), s = std::sin(thetas[j]);
        out(i0, i0) = c;
        out(i0, i1) = s;
        out(i1, i0) = -s;
        out(i1, i1) = c;
    }
    return out;
}

/// Multiplexed RZ on `ell`: phase e^{iδ_j} when `ell` is 0 and e^{−iδ_j} when it is 1.
inline DiagonalOperator mux_rz_diagonal(const std::vector<double> &deltas, int ell, int n) {
    std::vector<int> rest = other_qubits(n, {ell});
    ComplexVector out(Eigen::Index{1} << n);
    for (size_t j = 0; j < deltas.size(); j++) {
        out[(Eigen::Index)scatter_bits(scatter_bits(0, 0, {ell}, n), j, rest, n)] = std::polar(1.0, deltas[j]);
        out[(Eigen::Index)scatter_bits(scatter_bits(0, 1, {ell}, n), j, rest, n)] = std::polar(1.0, -deltas[j]);
    }
    return DiagonalOperator(std::move(out));
}

struct CsdResult {
    ComplexMatrix left;
    std::vector<double> thetas;
    ComplexMatrix right;
};

/// Cosine-sine decomposition along qubit `ell`: u = left · RY^(ell)(thetas) · right with
/// left and right commuting with Z on `ell` and every angle in [0, π/2].
inline CsdResult csd(const ComplexMatrix &u, int ell) {
    int n = qubits_for_dim(u.rows());
    check_qubit_list(n, {ell});
    if (n < 1) {
        throw Error("csd needs at least one qubit");
    }
    ComplexMatrix u00 = quadrant(u, ell, 0, 0);
    ComplexMatrix u01 = quadrant(u, ell, 0, 1);
    ComplexMatrix u10 = quadrant(u, ell, 1, 0);
    ComplexMatrix u11 = quadrant(u, ell, 1, 1);
    Eigen::Index h = u00.rows();

    SvdResult s = svd(u00);
    ComplexMatrix l0 = s.left;
    ComplexMatrix r0 = s.right.adjoint();

    // Columns of −U10·R0† are mutually orthogonal with norms sin θ. Normalizing them in
    // descending-norm order keeps the well-determined directions exact; columns that vanish
    // are completed to an orthonormal basis.
    ComplexMatrix w = -u10 * r0.adjoint();
    std::vector<Eigen::Index> order(h);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return w.col(a).norm() > w.col(b).norm(); });
    ComplexMatrix sorted(h, h);
    for (Eigen::Index k = 0; k < h; k++) {
        sorted.col(k) = w.col(order[k]);
    }
    orthonormalize_columns(sorted, 1e-13);
    ComplexMatrix l1(h, h);
    for (Eigen::Index k = 0; k < h; k++) {
        l1.col(order[k]) = sorted.col(k);
    }

    std::vector<double> thetas((size_t)h);
    RealVector cs(h), sn(h);
    for (Eigen::Index i = 0; i < h; i++) {
        double sin_part = std::max(0.0, l1.col(i).dot(w.col(i)).real());
        thetas[(size_t)i] = std::atan2(sin_part, s.sigma[i]);
        cs[i] = std::cos(thetas[(size_t)i]);
        sn[i] = std::sin(thetas[(size_t)i]);
    }
    // S² + C² = I lets both off-diagonal and diagonal blocks contribute to R1.
    ComplexMatrix r1 = sn.asDiagonal() * (l0.adjoint() * u01) + cs.asDiagonal() * (l1.adjoint() * u11);

    CsdResult out;
    out.left = direct_sum({l0, l1}, {ell});
    out.right = direct_sum({r0, r1}, {ell});
    out.thetas = std::move(thetas);
    double err = (out.left * mux_ry_matrix(out.thetas, ell, n) * out.right - u).norm();
    if (!(err < 1e-8)) {
        throw ConvergenceFailure("cosine-sine recomposition residual " + std::to_string(err));
    }
    return out;
}

struct DemuxResult {
    ComplexMatrix m;
    std::vector<double> delta;
    ComplexMatrix n;
};

/// For u commuting with Z on `ell`: U0 = M·e^{iδ}·N and U1 = M·e^{−iδ}·N.
inline DemuxResult demux(const ComplexMatrix &u, int ell) {
    int n = qubits_for_dim(u.rows());
    check_qubit_list(n, {ell});
    ComplexMatrix u0 = block(u, {ell}, 0, Tolerance{1e-8});
    ComplexMatrix u1 = block(u, {ell}, 1, Tolerance{1e-8});
    EigResult e = unitary_eig(u0 * u1.adjoint());
    DemuxResult out;
    out.m = e.vectors;
    out.delta.resize((size_t)e.values.size());
    ComplexVector half(e.values.size());
    for (Eigen::Index i = 0; i < e.values.size(); i++) {
        out.delta[(size_t)i] = std::arg(e.values[i]) / 2;
        half[i] = std::polar(1.0, out.delta[(size_t)i]);
    }
    out.n = half.asDiagonal() * (e.vectors.adjoint() * u1);
    double err = (out.m * half.asDiagonal() * out.n - u0).norm() +
                 (out.m * half.conjugate().asDiagonal() * out.n - u1).norm();
    if (!(err < 1e-8)) {
        throw ConvergenceFailure("demultiplexing recomposition residual " + std::to_string(err));
    }
    return out;
}

struct SplitDiagonal {
    std::vector<double> rz_angles;
    DiagonalOperator residual;
};

/// d = RZ^(ell)(angles) · (I_ell ⊗ residual), exactly.
inline SplitDiagonal split_diagonal(const DiagonalOperator &d, int ell) {
    int n = d.n_qubits();
    check_qubit_list(n, {ell});
    require_nonzero(d);
    std::vector<int> rest = other_qubits(n, {ell});
    size_t h = size_t{1} << rest.size();
    SplitDiagonal out;
    out.rz_angles.resize(h);
    ComplexVector r((Eigen::Index)h);
    for (size_t j = 0; j < h; j++) {
        Complex d0 = d[(Eigen::Index)scatter_bits(scatter_bits(0, 0, {ell}, n), j, rest, n)];
        Complex d1 = d[(Eigen::Index)scatter_bits(scatter_bits(0, 1, {ell}, n), j, rest, n)];
        double delta = std::arg(d0 * std::conj(d1)) / 2;
        out.rz_angles[j] = delta;
        r[(Eigen::Index)j] = d0 * std::polar(1.0, -delta);
    }
    out.residual = DiagonalOperator(std::move(r));
    return out;
}

/// Multiplexed RZ on `target` as alternating RZ and CX gates following a Gray code over the
/// controls: exactly 2^k CX gates for k controls, a single RZ when k = 0.
///
/// angles[j] applies when the controls read j, first control most significant.
inline Circuit mux_rz_synth(const std::vector<double> &angles, int target, const std::vector<int> &controls,
                            int n_qubits = -1) {
    size_t k = controls.size();
    if (angles.size() != (size_t{1} << k)) {
        throw Error("mux_rz_synth needs 2^k angles");
    }
    int n = n_qubits;
    if (n < 0) {
        n = target + 1;
        for (int c : controls) {
            n = std::max(n, c + 1);
        }
    }
    std::vector<int> all = controls;
    all.push_back(target);
    check_qubit_list(n, all);
    Circuit out(n);
    if (k == 0) {
        out.add(Gate::rz(target, angles[0]));
        return out;
    }
    size_t count = size_t{1} << k;
    for (size_t j = 0; j < count; j++) {
        size_t g = j ^ (j >> 1);
        double acc = 0;
        for (size_t c = 0; c < count; c++) {
            acc += (std::popcount(c & g) & 1 ? -1.0 : 1.0) * angles[c];
        }
        out.add(Gate::rz(target, acc / (double)count));
        size_t next = ((j + 1) % count) ^ (((j + 1) % count) >> 1);
        int bit = std::countr_zero(g ^ next);
        out.add(Gate::cx(controls[k - 1 - (size_t)bit], target));
    }
    return out;
}

/// Multiplexed RY on `target`, realized as a multiplexed RZ conjugated by S·H.
inline Circuit mux_ry_synth(const Circuit &rz_part, int target) {
    Circuit out(rz_part.n_qubits);
    out.add(Gate::delta(target, Complex(0, -1))).add(Gate::h(target));
    out.append(rz_part);
    out.add(Gate::h(target)).add(Gate::s(target));
    return out;
}

/// Like mux_rz_synth, but drops controls the angles do not depend on and skips vanishing rotations.
inline Circuit mux_rz_compact(std::vector<double> angles, int target, std::vector<int> controls, int n_qubits,
                              double tol = 1e-12) {
    for (size_t i = 0; i < controls.size();) {
        size_t k = controls.size();
        size_t stride = size_t{1} << (k - 1 - i);
        bool independent = true;
        for (size_t j = 0; j < angles.size() && independent; j++) {
            if (!(j & stride) && std::abs(angles[j] - angles[j | stride]) > tol) {
                independent = false;
            }
        }
        if (!independent) {
            i++;
            continue;
        }
        std::vector<double> reduced;
        for (size_t j = 0; j < angles.size(); j++) {
            if (!(j & stride)) {
                reduced.push_back(angles[j]);
            }
        }
        angles = std::move(reduced);
        controls.erase(controls.begin() + (std::ptrdiff_t)i);
    }
    if (controls.empty() && std::abs(angles[0]) <= tol) {
        return Circuit(n_qubits);
    }
    return mux_rz_synth(angles, target, controls, n_qubits);
}

inline Circuit mux_ry_compact(const std::vector<double> &angles, int target, const std::vector<int> &controls,
                              int n_qubits, double tol = 1e-12) {
    Circuit rz = mux_rz_compact(angles, target, controls, n_qubits, tol);
    if (rz.gates.empty()) {
        return rz;
    }
    if (rz.gates.size() == 1) {
        return Circuit(n_qubits, {Gate::ry(target, rz.gates[0].theta)});
    }
    return mux_ry_synth(rz, target);
}

/// Synthesizes diagonal `d` on the listed wires of an `n`-qubit register with 2^k − 2 CX gates,
/// k = wires.size(). Global phase is dropped.
inline Circuit diag_synth_on(const DiagonalOperator &d, const std::vector<int> &wires, int n) {
    if (d.n_qubits() != (int)wires.size()) {
        throw Error("diagonal size does not match wire count");
    }
    require_nonzero(d);
    Circuit out(n);
    DiagonalOperator cur = d;
    std::vector<int> live = wires;
    while (live.size() > 1) {
        int last = (int)live.size() - 1;
        SplitDiagonal s = split_diagonal(cur, last);
        std::vector<int> controls(live.begin(), live.end() - 1);
        out.append(mux_rz_synth(s.rz_angles, live.back(), controls, n));
        cur = s.residual;
        live.pop_back();
    }
    out.add(Gate::delta(live[0], cur[1] / cur[0]));
    return out;
}

/// Generic diagonal synthesis: exactly 2^n − 2 CX gates, correct up to global phase.
inline Circuit diag_synth_generic(const DiagonalOperator &d) {
    int n = d.n_qubits();
    if (n < 1) {
        throw Error("diag_synth_generic needs at least one qubit");
    }
    std::vector<int> wires(n);
    std::iota(wires.begin(), wires.end(), 0);
    return diag_synth_on(d, wires, n);
}

/// V = e^{i·phase} · RZ(alpha) · RY(beta) · RZ(gamma).
struct Zyz {
    double alpha = 0;
    double beta = 0;
    double gamma = 0;
    double phase = 0;
};

inline Zyz zyz(const ComplexMatrix &v) {
    Zyz out;
    out.phase = std::arg(v.determinant()) / 2;
    ComplexMatrix w = v * std::polar(1.0, -out.phase);
    out.beta = std::atan2(std::abs(w(0, 1)), std::abs(w(0, 0)));
    double sum = std::abs(w(0, 0)) > 1e-14 ? std::arg(w(0, 0)) : 0;
    double diff = std::abs(w(0, 1)) > 1e-14 ? std::arg(w(0, 1)) : 0;
    if (std::abs(w(0, 0)) <= 1e-14) {
        sum = std::abs(w(1, 1)) > 1e-14 ? -std::arg(w(1, 1)) : 0;
    }
    out.alpha = (sum + diff) / 2;
    out.gamma = (sum - diff) / 2;
    ComplexMatrix rebuilt = Gate::rz(0, out.alpha).matrix() * Gate::ry(0, out.beta).matrix() * Gate::rz(0, out.gamma).matrix();
    if ((rebuilt + w).norm() < (rebuilt - w).norm()) {
        out.alpha += kPi;
    }
    return out;
}

/// One-qubit unitary as RZ·RY·RZ in time order RZ(gamma), RY(beta), RZ(alpha); zero angles skipped.
inline void emit_zyz(Circuit &out, const ComplexMatrix &v, int wire, double tol = 1e-14) {
    Zyz z = zyz(v);
    for (auto g : {Gate::rz(wire, z.gamma), Gate::ry(wire, z.beta), Gate::rz(wire, z.alpha)}) {
        if (std::abs(g.theta) > tol) {
            out.add(g);
        }
    }
}

namespace detail {

/// Writes `u` as a ⊗ b across the cut (local qubit q | rest) when the operator-Schmidt rank is one.
inline bool split_tensor(const ComplexMatrix &u, int q, ComplexMatrix &a, ComplexMatrix &b) {
    int n = qubits_for_dim(u.rows());
    std::vector<int> rest = other_qubits(n, {q});
    Eigen::Index d = u.rows() / 2;
    ComplexMatrix r(4, d * d);
    for (int x = 0; x < 2; x++) {
        for (int y = 0; y < 2; y++) {
            for (Eigen::Index k = 0; k < d; k++) {
                for (Eigen::Index l = 0; l < d; l++) {
                    auto ri = (Eigen::Index)scatter_bits(scatter_bits(0, (size_t)x, {q}, n), (size_t)k, rest, n);
                    auto ci = (Eigen::Index)scatter_bits(scatter_bits(0, (size_t)y, {q}, n), (size_t)l, rest, n);
                    r(x * 2 + y, k * d + l) = u(ri, ci);
                }
            }
        }
    }
    Eigen::JacobiSVD<ComplexMatrix> s(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = s.singularValues();
    if (sv.size() > 1 && sv[1] > 1e-11 * sv[0]) {
        return false;
    }
    a.resize(2, 2);
    b.resize(d, d);
    for (int x = 0; x < 2; x++) {
        for (int y = 0; y < 2; y++) {
            a(x, y) = s.matrixU()(x * 2 + y, 0) * std::sqrt(2.0);
        }
    }
    for (Eigen::Index k = 0; k < d; k++) {
        for (Eigen::Index l = 0; l < d; l++) {
            b(k, l) = std::conj(s.matrixV()(k * d + l, 0)) * sv[0] / std::sqrt(2.0);
        }
    }
    return true;
}

inline void qsd_into(Circuit &out, const ComplexMatrix &u, const std::vector<int> &wires) {
    int n = (int)wires.size();
    if (n == 1) {
        emit_zyz(out, u, wires[0]);
        return;
    }
    for (int q = 0; q < n; q++) {
        ComplexMatrix a, b;
        if (split_tensor(u, q, a, b)) {
            std::vector<int> rest_wires;
            for (int k : other_qubits(n, {q})) {
                rest_wires.push_back(wires[(size_t)k]);
            }
            emit_zyz(out, a, wires[(size_t)q]);
            qsd_into(out, b, rest_wires);
            return;
        }
    }
    std::vector<int> rest(wires.begin() + 1, wires.end());
    CsdResult cs = csd(u, 0);
    DemuxResult dl = demux(cs.left, 0);
    DemuxResult dr = demux(cs.right, 0);
    qsd_into(out, dr.n, rest);
    out.append(mux_rz_compact(dr.delta, wires[0], rest, out.n_qubits));
    qsd_into(out, dr.m, rest);
    out.append(mux_ry_compact(cs.thetas, wires[0], rest, out.n_qubits));
    qsd_into(out, dl.n, rest);
    out.append(mux_rz_compact(dl.delta, wires[0], rest, out.n_qubits));
    qsd_into(out, dl.m, rest);
}

}  // namespace detail

/// Generic synthesis of an arbitrary unitary on up to four qubits by alternating cosine-sine and
/// demultiplexing steps. No minimality is claimed.
inline Circuit qsd_synth(const ComplexMatrix &u) {
    int n = qubits_for_dim(u.rows());
    if (n > 4) {
        throw Error("qsd_synth supports at most four qubits");
    }
    Circuit out(n);
    if (n == 0) {
        return out;
    }
    std::vector<int> wires(n);
    std::iota(wires.begin(), wires.end(), 0);
    detail::qsd_into(out, u, wires);
    double err = dist_phase(simulate(out), u);
    if (!(err < 1e-7)) {
        throw ConvergenceFailure("qsd synthesis residual " + std::to_string(err));
    }
    return out;
}

namespace detail {

/// Emits a one-qubit unitary per locked setting as three multiplexed rotations over `controls`.
inline void emit_mux_zyz(Circuit &out, const std::vector<ComplexMatrix> &per_setting, int wire,
                         const std::vector<int> &controls) {
    std::vector<double> al, be, ga;
    for (const auto &v : per_setting) {
        Zyz z = zyz(v);
        al.push_back(z.alpha);
        be.push_back(z.beta);
        ga.push_back(z.gamma);
    }
    out.append(mux_rz_compact(ga, wire, controls, out.n_qubits));
    out.append(mux_ry_compact(be, wire, controls, out.n_qubits));
    out.append(mux_rz_compact(al, wire, controls, out.n_qubits));
}

}  // namespace detail

/// Circuit for a multiplexor `u` over the `locked` qubits in which every gate touching a locked
/// qubit is diagonal. Requires the partial determinant over `locked` to be separable and at most
/// two free qubits. Throws NotSeparable otherwise.
inline Circuit mux_universal_synth(const ComplexMatrix &u, const std::vector<int> &locked) {
    int n = qubits_for_dim(u.rows());
    check_qubit_list(n, locked);
    if (off_block_norm(u, locked) > 1e-8) {
        throw NotBlockDiagonal("operator does not commute with Z on the locked qubits");
    }
    std::vector<int> free = other_qubits(n, locked);
    if (free.size() > 2) {
        throw Error("mux_universal_synth supports at most two free qubits");
    }
    Circuit out(n);

    ComplexMatrix off = u;
    off.diagonal().setZero();
    if (off.norm() < 1e-9) {
        if (auto sep = is_separable_diag(DiagonalOperator(ComplexVector(u.diagonal())))) {
            for (int q = 0; q < n; q++) {
                Complex ratio = sep->factors[(size_t)q][1] / sep->factors[(size_t)q][0];
                if (std::abs(ratio - 1.0) > 1e-14) {
                    out.add(Gate::delta(q, ratio));
                }
            }
            return out;
        }
    }

    auto sep = is_separable_diag(partial_det(u, locked, Tolerance{1e-8}));
    if (!sep) {
        throw NotSeparable("partial determinant over the locked qubits is not separable");
    }
    const double k = (double)(1u << free.size());
    std::vector<std::array<Complex, 2>> roots;
    for (size_t i = 0; i < locked.size(); i++) {
        std::array<Complex, 2> r;
        for (int b = 0; b < 2; b++) {
            Complex z = sep->factors[i][(size_t)b];
            r[(size_t)b] = std::polar(std::pow(std::abs(z), 1 / k), std::arg(z) / k);
        }
        roots.push_back(r);
        Complex ratio = r[1] / r[0];
        if (std::abs(ratio - 1.0) > 1e-14) {
            out.add(Gate::delta(locked[i], ratio));
        }
    }

    size_t settings = size_t{1} << locked.size();
    std::vector<ComplexMatrix> blocks;
    for (size_t j = 0; j < settings; j++) {
        Complex c = 1;
        for (size_t i = 0; i < locked.size(); i++) {
            c *= roots[i][(size_t)((j >> (locked.size() - 1 - i)) & 1)];
        }
        blocks.push_back(block(u, locked, j, Tolerance{1e-8}) / c);
    }

    Circuit tmpl(n);
    if (free.size() == 1) {
        detail::emit_mux_zyz(tmpl, blocks, free[0], locked);
    } else if (free.size() == 2) {
        int a = free[0];
        int b = free[1];
        std::vector<int> with_b = locked;
        with_b.push_back(b);
        std::vector<ComplexMatrix> mr, nr, ml, nl;
        std::vector<double> dr, dl, th;
        for (const auto &v : blocks) {
            CsdResult cs = csd(v, 0);
            DemuxResult l = demux(cs.left, 0);
            DemuxResult r = demux(cs.right, 0);
            mr.push_back(r.m);
            nr.push_back(r.n);
            ml.push_back(l.m);
            nl.push_back(l.n);
            dr.insert(dr.end(), r.delta.begin(), r.delta.end());
            dl.insert(dl.end(), l.delta.begin(), l.delta.end());
            th.insert(th.end(), cs.thetas.begin(), cs.thetas.end());
        }
        detail::emit_mux_zyz(tmpl, nr, b, locked);
        tmpl.append(mux_rz_compact(dr, a, with_b, n));
        detail::emit_mux_zyz(tmpl, mr, b, locked);
        tmpl.append(mux_ry_compact(th, a, with_b, n));
        detail::emit_mux_zyz(tmpl, nl, b, locked);
        tmpl.append(mux_rz_compact(dl, a, with_b, n));
        detail::emit_mux_zyz(tmpl, ml, b, locked);
    }

    if (!free.empty()) {
        // Each block is matched only up to a scalar that is a 2^f-th root of unity relative to
        // setting 0; a multiplexed phase layer removes it.
        ComplexMatrix sim = simulate(tmpl);
        Complex w0 = 0;
        std::vector<int> m(settings, 0);
        for (size_t j = 0; j < settings; j++) {
            ComplexMatrix t = block(sim, locked, j, Tolerance{1e-8});
            Complex w = (t.adjoint() * blocks[j]).trace() / k;
            if (j == 0) {
                w0 = w;
            }
            double steps = std::arg(w / w0) * k / (2 * kPi);
            long r = std::lround(steps);
            if (std::abs(steps - (double)r) > 1e-6) {
                throw ConvergenceFailure("block phase is not a root of unity");
            }
            m[j] = (int)(((r % (long)k) + (long)k) % (long)k);
        }
        std::vector<double> pa, pb;
        if (free.size() == 1) {
            for (size_t j = 0; j < settings; j++) {
                pa.push_back(kPi * m[j]);
            }
            tmpl.append(mux_rz_compact(pa, free[0], locked, n));
        } else {
            for (size_t j = 0; j < settings; j++) {
                pb.push_back(kPi / 2 * m[j]);
                pa.push_back(0);
                pa.push_back(kPi * m[j]);
            }
            std::vector<int> with_b = locked;
            with_b.push_back(free[1]);
            tmpl.append(mux_rz_compact(pb, free[1], locked, n));
            tmpl.append(mux_rz_compact(pa, free[0], with_b, n));
        }
    }
    out.append(h_conjugate(tmpl, HDirection::cx_to_cz));
    double err = dist_phase(simulate(out), u);
    if (!(err < 1e-6)) {
        throw ConvergenceFailure("multiplexed synthesis residual " + std::to_string(err));
    }
    return out;
}

}  // namespace czsynth
