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
#include <charconv>
#include <string>
#include <string_view>

#include "czsynth/circuit.hpp"
#include "czsynth/decomp.hpp"
#include "czsynth/invariants.hpp"
#include "czsynth/separable.hpp"

namespace czsynth {

enum class Gateset { cz, cx };

struct SynthResult {
    /// Template followed by the correction DELTA gates; equals the target up to `phase()`.
    Circuit circuit;
    /// Template alone, before corrections.
    Circuit core;
    int cz_count = 0;
    std::string case_label;
    /// corrections.product() ⊙ diag(simulate(core)) == target.
    SeparableFactors corrections;

    Complex phase() const {
        return corrections.factors.at(0)[0];
    }
};

/// One-qubit diagonal factors F with F ⊙ core == target.
inline SeparableFactors factor_corrections(const DiagonalOperator &target, const DiagonalOperator &core) {
    if (target.size() != core.size()) {
        throw Error("factor_corrections: size mismatch");
    }
    require_nonzero(target);
    require_nonzero(core);
    ComplexVector ratio = target.entries.cwiseQuotient(core.entries);
    auto f = is_separable_diag(DiagonalOperator(ratio));
    if (!f) {
        throw NotSeparable("target and core differ by a non-separable diagonal");
    }
    double err = (f->product().entries.cwiseProduct(core.entries) - target.entries).norm();
    if (err > 1e-9 * std::sqrt((double)target.size())) {
        throw NotSeparable("correction factors do not recompose the target");
    }
    return *f;
}

namespace detail {

inline DiagonalOperator diag_of(const Circuit &c) {
    return DiagonalOperator::from_matrix(simulate(c));
}

/// Diagonal whose qubit t carries qubit perm[t] of `d`.
inline DiagonalOperator permute_wires(const DiagonalOperator &d, const std::array<int, 3> &perm) {
    ComplexVector out(8);
    for (size_t i = 0; i < 8; i++) {
        size_t src = 0;
        for (int t = 0; t < 3; t++) {
            if (bit_of(i, t, 3)) {
                src |= size_t{1} << (2 - perm[(size_t)t]);
            }
        }
        out[(Eigen::Index)i] = d[(Eigen::Index)src];
    }
    return DiagonalOperator(std::move(out));
}

/// Does the ordered invariant tuple match the pattern the template for `label` realizes?
inline bool matches_template(const std::string &label, const DiagInvariants &s, double tol) {
    const Complex one(1, 0), neg(-1, 0);
    const Complex a = s.lambda[0], b = s.lambda[1], c = s.lambda[2], xi = s.xi;
    if (label == "0") {
        return near(a, one, tol) && near(b, one, tol) && near(c, one, tol) && near(xi, one, tol);
    }
    if (label == "1") {
        return near(a, one, tol) && near(b, one, tol) && near(c, neg, tol) && near(xi, neg, tol);
    }
    if (label == "2a") {
        return near(a, xi, tol) && near(b, one, tol) && near(c, one, tol);
    }
    if (label == "2b") {
        return near(a, one, tol) && near(b, neg, tol) && near(c, neg, tol) && near(xi, one, tol);
    }
    if (label == "3b") {
        return near(a, xi, tol) && near(b, neg, tol) && near(c, neg, tol);
    }
    if (label == "3c") {
        return near(a, -xi, tol) && near(b, one, tol) && near(c, neg, tol);
    }
    if (label == "4") {
        return near(xi * c, a * b, tol);
    }
    if (label == "5b") {
        return near(xi, a * b * c, tol);
    }
    return label == "6";
}

}  // namespace detail

/// Circuit (CX and CZ gates plus DELTA phases) whose diagonal has exactly the ordered invariants
/// `s`, assuming `s` fits the pattern of `label`. Case 6 is not a template; see synth_3qdiag.
inline Circuit case_template(const std::string &label, const DiagInvariants &s) {
    Circuit c(3);
    auto d = [&](int q, Complex eta) { c.add(Gate::delta(q, eta)); };
    auto cx = [&](int a, int b) { c.add(Gate::cx(a, b)); };
    auto cz = [&](int a, int b) { c.add(Gate::cz(a, b)); };
    if (label == "0") {
        return c;
    }
    if (label == "1") {
        cz(0, 1);
    } else if (label == "2a" || label == "3b" || label == "3c") {
        Complex eta = principal_sqrt(label == "3c" ? -s.xi : s.xi);
        d(1, eta);
        d(2, eta);
        cx(1, 2);
        d(2, 1.0 / eta);
        if (label == "3b") {
            cz(0, 2);
        }
        cx(1, 2);
        if (label == "3c") {
            cz(0, 1);
        }
    } else if (label == "2b") {
        cz(0, 2);
        cz(0, 1);
    } else if (label == "4") {
        Complex al = principal_sqrt(s.lambda[0]);
        Complex be = principal_sqrt(s.lambda[1]);
        Complex ga = principal_sqrt(s.lambda[2]);
        d(0, be);
        d(1, al);
        d(2, al * be / ga);
        cx(1, 2);
        d(2, ga / al);
        cx(0, 2);
        d(2, 1.0 / ga);
        cx(1, 2);
        d(2, ga / be);
        cx(0, 2);
    } else if (label == "5b") {
        Complex al = principal_sqrt(s.lambda[0]);
        Complex be = principal_sqrt(s.lambda[1]);
        Complex ga = principal_sqrt(s.lambda[2]);
        d(0, be * ga);
        d(1, al * ga);
        d(2, al * be);
        cx(1, 2);
        cx(0, 1);
        d(2, 1.0 / al);
        cx(1, 2);
        d(1, 1.0 / ga);
        d(2, 1.0 / be);
        cx(0, 1);
        cx(0, 2);
    } else {
        throw UnknownName("no template for case '" + label + "'");
    }
    return c;
}

/// Minimal circuit for a three-qubit diagonal. The case is chosen by classify_3qdiag; the
/// template is placed on whichever wire ordering makes its invariant pattern match.
inline SynthResult synth_3qdiag(const DiagonalOperator &d, Gateset gateset = Gateset::cz) {
    if (d.size() != 8) {
        throw Error("synth_3qdiag needs a three-qubit diagonal");
    }
    require_nonzero(d);
    CostReport cls = classify_3qdiag(d);
    std::string label = cls.rationale.substr(5, cls.rationale.find(':') - 5);

    Circuit core(3);
    if (label == "6") {
        core = diag_synth_generic(d);
    } else {
        bool placed = false;
        for (const auto &perm : detail::permutations3()) {
            DiagInvariants s = diag_invariants(detail::permute_wires(d, perm));
            if (!detail::matches_template(label, s, 1e-8)) {
                continue;
            }
            core = case_template(label, s).relabeled({perm[0], perm[1], perm[2]}, 3);
            placed = true;
            break;
        }
        if (!placed) {
            throw ConvergenceFailure("no wire ordering matches case " + label);
        }
    }
    core = h_conjugate(core, gateset == Gateset::cz ? HDirection::cx_to_cz : HDirection::cz_to_cx);

    SynthResult r;
    r.core = core;
    r.case_label = label;
    r.cz_count = (int)core.two_qubit_count();
    r.corrections = factor_corrections(d, detail::diag_of(core));
    r.circuit = core;
    for (int q = 0; q < 3; q++) {
        const auto &f = r.corrections.factors[(size_t)q];
        Complex eta = f[1] / f[0];
        if (std::abs(eta - 1.0) > 1e-15) {
            r.circuit.add(Gate::delta(q, eta));
        }
    }
    ComplexVector got = detail::diag_of(r.circuit).entries * r.phase();
    if ((got - d.entries).norm() > 1e-8) {
        throw ConvergenceFailure("synthesized circuit fails simulation check for case " + label);
    }
    return r;
}

namespace detail {

/// Toffoli from six CX gates and T-type phases, qubit 2 the target.
inline Circuit figure1() {
    Circuit c(3);
    c.add(Gate::h(2)).add(Gate::cx(1, 2)).add(Gate::tdg(2)).add(Gate::cx(0, 2));
    c.add(Gate::t(2)).add(Gate::cx(1, 2)).add(Gate::tdg(2)).add(Gate::cx(0, 2));
    c.add(Gate::t(1)).add(Gate::t(2)).add(Gate::h(2)).add(Gate::cx(0, 1));
    c.add(Gate::t(0)).add(Gate::tdg(1)).add(Gate::cx(0, 1));
    return c;
}

/// CCZ with six CZ gates: the Toffoli circuit without its outer H gates, CX rewritten as H·CZ·H.
inline Circuit ccz_eq() {
    Circuit f = figure1();
    Circuit inner(3, std::vector<Gate>(f.gates.begin() + 1, f.gates.end()));
    inner.gates.erase(inner.gates.begin() + 9);
    return h_conjugate(inner, HDirection::cx_to_cz);
}

}  // namespace detail

/// Diagonal with a single −1 on |1…1⟩.
inline DiagonalOperator multi_controlled_z(int n) {
    ComplexVector v = ComplexVector::Ones(Eigen::Index{1} << n);
    v[v.size() - 1] = -1;
    return DiagonalOperator(std::move(v));
}

/// Named circuits: toffoli, figure1, ccz, ccz_eq, peres, four_qubit_local2, n_controlled_z(n).
inline Circuit reference(std::string_view name) {
    if (name == "figure1" || name == "toffoli") {
        return detail::figure1();
    }
    if (name == "ccz_eq" || name == "ccz") {
        return detail::ccz_eq();
    }
    if (name == "peres") {
        Circuit c = detail::figure1();
        c.gates.pop_back();
        return c;
    }
    if (name == "four_qubit_local2") {
        // The ancilla (qubit 3) copies qubit 0 between two CCZs, so qubit 0 sees only two CZs.
        std::vector<int> onto = {3, 1, 2};
        Circuit ccz = detail::ccz_eq().relabeled(onto, 4);
        Circuit c(4);
        for (int rep = 0; rep < 2; rep++) {
            c.add(Gate::h(3)).add(Gate::cz(0, 3)).add(Gate::h(3));
            c.append(ccz);
        }
        return c;
    }
    constexpr std::string_view prefix = "n_controlled_z(";
    if (name.substr(0, prefix.size()) == prefix && name.size() > prefix.size() + 1 && name.back() == ')') {
        std::string_view digits = name.substr(prefix.size(), name.size() - prefix.size() - 1);
        int n = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && n >= 1 && n <= 5) {
            return h_conjugate(diag_synth_generic(multi_controlled_z(n)), HDirection::cx_to_cz);
        }
    }
    throw UnknownName("unknown reference circuit '" + std::string(name) + "'");
}

}  // namespace czsynth
