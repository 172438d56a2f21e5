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
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "czsynth/linalg.hpp"

namespace czsynth {

enum class GateKind : uint8_t { H, T, Tdg, X, Y, Z, S, RX, RY, RZ, DELTA, U2, CZ, CX };

/// One gate. Two-qubit gates use `q0` and `q1` (CX: control, target). Rotations follow the
/// convention RZ(θ) = exp(iZθ), without the usual factor of one half.
struct Gate {
    GateKind kind = GateKind::H;
    int q0 = 0;
    int q1 = -1;
    double theta = 0;
    Complex eta{1, 0};
    std::array<Complex, 4> u{Complex{1}, Complex{0}, Complex{0}, Complex{1}};

    static Gate one(GateKind k, int q) {
        Gate g;
        g.kind = k;
        g.q0 = q;
        return g;
    }
    static Gate h(int q) {
        return one(GateKind::H, q);
    }
    static Gate t(int q) {
        return one(GateKind::T, q);
    }
    static Gate tdg(int q) {
        return one(GateKind::Tdg, q);
    }
    static Gate x(int q) {
        return one(GateKind::X, q);
    }
    static Gate y(int q) {
        return one(GateKind::Y, q);
    }
    static Gate z(int q) {
        return one(GateKind::Z, q);
    }
    static Gate s(int q) {
        return one(GateKind::S, q);
    }
    static Gate rot(GateKind k, int q, double theta) {
        Gate g = one(k, q);
        g.theta = theta;
        return g;
    }
    static Gate rx(int q, double theta) {
        return rot(GateKind::RX, q, theta);
    }
    static Gate ry(int q, double theta) {
        return rot(GateKind::RY, q, theta);
    }
    static Gate rz(int q, double theta) {
        return rot(GateKind::RZ, q, theta);
    }
    static Gate delta(int q, Complex eta) {
        Gate g = one(GateKind::DELTA, q);
        g.eta = eta;
        return g;
    }
    static Gate u2(int q, const ComplexMatrix &m) {
        Gate g = one(GateKind::U2, q);
        g.u = {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
        return g;
    }
    static Gate cz(int a, int b) {
        Gate g;
        g.kind = GateKind::CZ;
        g.q0 = a;
        g.q1 = b;
        return g;
    }
    static Gate cx(int control, int target) {
        Gate g;
        g.kind = GateKind::CX;
        g.q0 = control;
        g.q1 = target;
        return g;
    }

    bool is_two_qubit() const {
        return kind == GateKind::CZ || kind == GateKind::CX;
    }
    bool touches(int q) const {
        return q0 == q || (is_two_qubit() && q1 == q);
    }
    /// True for gates whose matrix is diagonal in the computational basis.
    bool is_diagonal() const {
        switch (kind) {
            case GateKind::T:
            case GateKind::Tdg:
            case GateKind::Z:
            case GateKind::S:
            case GateKind::RZ:
            case GateKind::DELTA:
            case GateKind::CZ:
                return true;
            case GateKind::U2:
                return std::abs(u[1]) == 0 && std::abs(u[2]) == 0;
            default:
                return false;
        }
    }

    /// 2×2 matrix of a one-qubit gate.
    ComplexMatrix matrix() const {
        ComplexMatrix m(2, 2);
        const Complex i(0, 1);
        const double r = 1 / std::sqrt(2.0);
        double c = std::cos(theta), s = std::sin(theta);
        switch (kind) {
            case GateKind::H:
                m << r, r, r, -r;
                break;
            case GateKind::T:
                m << 1, 0, 0, std::polar(1.0, kPi / 4);
                break;
            case GateKind::Tdg:
                m << 1, 0, 0, std::polar(1.0, -kPi / 4);
                break;
            case GateKind::X:
                m << 0, 1, 1, 0;
                break;
            case GateKind::Y:
                m << 0, -i, i, 0;
                break;
            case GateKind::Z:
                m << 1, 0, 0, -1;
                break;
            case GateKind::S:
                m << 1, 0, 0, i;
                break;
            case GateKind::RX:
                m << c, i * s, i * s, c;
                break;
            case GateKind::RY:
                m << c, s, -s, c;
                break;
            case GateKind::RZ:
                m << std::polar(1.0, theta), 0, 0, std::polar(1.0, -theta);
                break;
            case GateKind::DELTA:
                m << 1, 0, 0, eta;
                break;
            case GateKind::U2:
                m << u[0], u[1], u[2], u[3];
                break;
            default:
                throw Error("matrix() called on a two-qubit gate");
        }
        return m;
    }

    bool operator==(const Gate &o) const {
        if (kind != o.kind || q0 != o.q0) {
            return false;
        }
        if (is_two_qubit()) {
            return q1 == o.q1;
        }
        switch (kind) {
            case GateKind::RX:
            case GateKind::RY:
            case GateKind::RZ:
                return theta == o.theta;
            case GateKind::DELTA:
                return eta == o.eta;
            case GateKind::U2:
                return u == o.u;
            default:
                return true;
        }
    }
};

/// Ordered gate list. Gates apply in list order (first element acts on the state first).
struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;

    Circuit() = default;
    explicit Circuit(int n, std::vector<Gate> g = {}) : n_qubits(n), gates(std::move(g)) {
    }

    Circuit &add(const Gate &g) {
        gates.push_back(g);
        return *this;
    }
    Circuit &append(const Circuit &other) {
        if (other.n_qubits > n_qubits) {
            n_qubits = other.n_qubits;
        }
        gates.insert(gates.end(), other.gates.begin(), other.gates.end());
        return *this;
    }
    size_t two_qubit_count() const {
        size_t k = 0;
        for (const auto &g : gates) {
            k += g.is_two_qubit();
        }
        return k;
    }
    size_t size() const {
        return gates.size();
    }
    bool operator==(const Circuit &o) const {
        return n_qubits == o.n_qubits && gates == o.gates;
    }

    /// Relabels wires: qubit q becomes `map[q]` in a register of `new_n` qubits.
    Circuit relabeled(const std::vector<int> &map, int new_n) const {
        Circuit out(new_n);
        for (Gate g : gates) {
            g.q0 = map.at((size_t)g.q0);
            if (g.is_two_qubit()) {
                g.q1 = map.at((size_t)g.q1);
            }
            out.gates.push_back(g);
        }
        return out;
    }
};

inline void validate(const Circuit &c) {
    for (const auto &g : c.gates) {
        if (g.q0 < 0 || g.q0 >= c.n_qubits) {
            throw Error("gate qubit out of range");
        }
        if (g.is_two_qubit() && (g.q1 < 0 || g.q1 >= c.n_qubits || g.q1 == g.q0)) {
            throw Error("two-qubit gate has invalid or repeated qubits");
        }
    }
}

/// Left-multiplies `state` (any number of columns) by gate `g` in place.
inline void apply_gate(ComplexMatrix &state, const Gate &g, int n) {
    Eigen::Index d = Eigen::Index{1} << n;
    if (g.kind == GateKind::CZ) {
        Eigen::Index ma = Eigen::Index{1} << (n - 1 - g.q0);
        Eigen::Index mb = Eigen::Index{1} << (n - 1 - g.q1);
        for (Eigen::Index r = 0; r < d; r++) {
            if ((r & ma) && (r & mb)) {
                state.row(r) *= -1.0;
            }
        }
        return;
    }
    if (g.kind == GateKind::CX) {
        Eigen::Index mc = Eigen::Index{1} << (n - 1 - g.q0);
        Eigen::Index mt = Eigen::Index{1} << (n - 1 - g.q1);
        for (Eigen::Index r = 0; r < d; r++) {
            if ((r & mc) && !(r & mt)) {
                state.row(r).swap(state.row(r | mt));
            }
        }
        return;
    }
    ComplexMatrix m = g.matrix();
    Eigen::Index mq = Eigen::Index{1} << (n - 1 - g.q0);
    for (Eigen::Index r = 0; r < d; r++) {
        if (r & mq) {
            continue;
        }
        Eigen::Index r1 = r | mq;
        Eigen::RowVectorXcd a = state.row(r);
        Eigen::RowVectorXcd b = state.row(r1);
        state.row(r) = m(0, 0) * a + m(0, 1) * b;
        state.row(r1) = m(1, 0) * a + m(1, 1) * b;
    }
}

/// Full unitary of the circuit: (last gate)···(first gate).
inline ComplexMatrix simulate(const Circuit &c) {
    validate(c);
    if (c.n_qubits > kMaxQubits) {
        throw Error("simulate supports at most " + std::to_string(kMaxQubits) + " qubits");
    }
    ComplexMatrix u = identity(c.n_qubits);
    for (const auto &g : c.gates) {
        apply_gate(u, g, c.n_qubits);
    }
    return u;
}

enum class HDirection { cz_to_cx, cx_to_cz };

/// Replaces each CX with H·CZ·H on the target (cx_to_cz), or each CZ with H·CX·H on its second qubit (cz_to_cx).
inline Circuit h_conjugate(const Circuit &c, HDirection dir) {
    Circuit out(c.n_qubits);
    for (const auto &g : c.gates) {
        if (dir == HDirection::cx_to_cz && g.kind == GateKind::CX) {
            out.add(Gate::h(g.q1)).add(Gate::cz(g.q0, g.q1)).add(Gate::h(g.q1));
        } else if (dir == HDirection::cz_to_cx && g.kind == GateKind::CZ) {
            out.add(Gate::h(g.q1)).add(Gate::cx(g.q0, g.q1)).add(Gate::h(g.q1));
        } else {
            out.add(g);
        }
    }
    return out;
}

namespace detail {

/// Expresses a 2×2 unitary as a named gate when it is one exactly, otherwise as U2.
inline Gate one_qubit_from(const Gate &original, const ComplexMatrix &m) {
    if ((original.matrix() - m).norm() == 0) {
        return original;
    }
    Gate g = original;
    if (original.kind == GateKind::RX || original.kind == GateKind::RY || original.kind == GateKind::RZ) {
        g.theta = -original.theta;
        if ((g.matrix() - m).norm() == 0) {
            return g;
        }
    }
    return Gate::u2(original.q0, m);
}

}  // namespace detail

/// Moves every X gate later in time through CZ and CX gates using CZ·X^(a) = X^(a)·Z^(b)·CZ.
///
/// A Pauli frame Z^z X^x per wire is carried forward; other one-qubit gates are conjugated by the
/// frame so the result is exact, including global phase.
inline Circuit demorgan_push(const Circuit &c) {
    validate(c);
    int n = c.n_qubits;
    std::vector<uint8_t> fx(n, 0), fz(n, 0);
    bool negate = false;
    Circuit out(n);
    for (const auto &g : c.gates) {
        switch (g.kind) {
            case GateKind::X:
                // X · Z^z X^x = (−1)^z Z^z X^(x+1)
                if (fz[g.q0]) {
                    negate = !negate;
                }
                fx[g.q0] ^= 1;
                break;
            case GateKind::CZ:
                out.add(g);
                // CZ·(X⊗X)·CZ = XZ⊗ZX = −(ZX⊗ZX)
                if (fx[g.q0] && fx[g.q1]) {
                    negate = !negate;
                }
                fz[g.q0] ^= fx[g.q1];
                fz[g.q1] ^= fx[g.q0];
                break;
            case GateKind::CX:
                out.add(g);
                fz[g.q0] ^= fz[g.q1];
                fx[g.q1] ^= fx[g.q0];
                break;
            default: {
                int q = g.q0;
                if (!fx[q] && !fz[q]) {
                    out.add(g);
                    break;
                }
                ComplexMatrix p = ComplexMatrix::Identity(2, 2);
                if (fx[q]) {
                    p = Gate::x(q).matrix();
                }
                if (fz[q]) {
                    p = (Gate::z(q).matrix() * p).eval();
                }
                out.add(detail::one_qubit_from(g, p.adjoint() * g.matrix() * p));
                break;
            }
        }
    }
    for (int q = 0; q < n; q++) {
        if (fx[q]) {
            out.add(Gate::x(q));
        }
        if (fz[q]) {
            if (negate) {
                ComplexMatrix mz(2, 2);
                mz << -1, 0, 0, 1;
                out.add(Gate::u2(q, mz));
                negate = false;
            } else {
                out.add(Gate::z(q));
            }
        }
    }
    if (negate) {
        out.add(Gate::u2(0, -ComplexMatrix::Identity(2, 2)));
    }
    return out;
}

struct CzProfile {
    std::vector<int> incidences;
    int total = 0;
};

/// Per-qubit count of incident CZ/CX gates and the total two-qubit gate count.
inline CzProfile cz_profile(const Circuit &c) {
    CzProfile p;
    p.incidences.assign((size_t)c.n_qubits, 0);
    for (const auto &g : c.gates) {
        if (g.is_two_qubit()) {
            p.incidences.at((size_t)g.q0)++;
            p.incidences.at((size_t)g.q1)++;
            p.total++;
        }
    }
    return p;
}

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline const char *gate_name(GateKind k) {
    switch (k) {
        case GateKind::H:
            return "H";
        case GateKind::T:
            return "T";
        case GateKind::Tdg:
            return "TDG";
        case GateKind::X:
            return "X";
        case GateKind::Y:
            return "Y";
        case GateKind::Z:
            return "Z";
        case GateKind::S:
            return "S";
        case GateKind::RX:
            return "RX";
        case GateKind::RY:
            return "RY";
        case GateKind::RZ:
            return "RZ";
        case GateKind::DELTA:
            return "DELTA";
        case GateKind::U2:
            return "U";
        case GateKind::CZ:
            return "CZ";
        case GateKind::CX:
            return "CX";
    }
    return "?";
}

inline std::string emit_gate(const Gate &g) {
    std::string s = gate_name(g.kind);
    s += ' ';
    s += std::to_string(g.q0);
    switch (g.kind) {
        case GateKind::CZ:
        case GateKind::CX:
            s += ' ' + std::to_string(g.q1);
            break;
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
            s += ' ' + format_double(g.theta);
            break;
        case GateKind::DELTA:
            s += ' ' + format_double(g.eta.real()) + ' ' + format_double(g.eta.imag());
            break;
        case GateKind::U2:
            for (const auto &e : g.u) {
                s += ' ' + format_double(e.real()) + ' ' + format_double(e.imag());
            }
            break;
        default:
            break;
    }
    return s;
}

/// Text form: a `# qubits: N` header, then one gate per line in time order.
inline std::string emit(const Circuit &c) {
    std::string out = "# qubits: " + std::to_string(c.n_qubits) + "\n";
    for (const auto &g : c.gates) {
        out += emit_gate(g);
        out += '\n';
    }
    return out;
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace((unsigned char)line[i])) {
            i++;
        }
        size_t j = i;
        while (j < line.size() && !std::isspace((unsigned char)line[j])) {
            j++;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

inline double parse_number(std::string_view tok, int line) {
    double v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw ParseError("bad number '" + std::string(tok) + "'", line);
    }
    return v;
}

inline int parse_qubit(std::string_view tok, int line) {
    int v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v < 0) {
        throw ParseError("bad qubit index '" + std::string(tok) + "'", line);
    }
    return v;
}

}  // namespace detail

/// Parses the text form. Without a header the register size is one more than the largest index used.
inline Circuit parse(std::string_view text) {
    Circuit c;
    int declared = -1;
    int max_q = -1;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            auto comment = detail::split_ws(line.substr(hash + 1));
            if (comment.size() == 2 && comment[0] == "qubits:") {
                if (declared >= 0) {
                    throw ParseError("duplicate qubit header", line_no);
                }
                declared = detail::parse_qubit(comment[1], line_no);
            }
            line = line.substr(0, hash);
        }
        auto tok = detail::split_ws(line);
        if (tok.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        std::string name(tok[0]);
        auto need = [&](size_t k) {
            if (tok.size() != k) {
                throw ParseError(name + " expects " + std::to_string(k - 1) + " arguments", line_no);
            }
        };
        Gate g;
        if (name == "CZ" || name == "CX") {
            need(3);
            g = name == "CZ" ? Gate::cz(detail::parse_qubit(tok[1], line_no), detail::parse_qubit(tok[2], line_no))
                             : Gate::cx(detail::parse_qubit(tok[1], line_no), detail::parse_qubit(tok[2], line_no));
            if (g.q0 == g.q1) {
                throw ParseError("two-qubit gate on a single wire", line_no);
            }
            max_q = std::max({max_q, g.q0, g.q1});
        } else {
            if (tok.size() < 2) {
                throw ParseError(name + " needs a qubit", line_no);
            }
            int q = detail::parse_qubit(tok[1], line_no);
            max_q = std::max(max_q, q);
            if (name == "H") {
                need(2), g = Gate::h(q);
            } else if (name == "T") {
                need(2), g = Gate::t(q);
            } else if (name == "TDG") {
                need(2), g = Gate::tdg(q);
            } else if (name == "X") {
                need(2), g = Gate::x(q);
            } else if (name == "Y") {
                need(2), g = Gate::y(q);
            } else if (name == "Z") {
                need(2), g = Gate::z(q);
            } else if (name == "S") {
                need(2), g = Gate::s(q);
            } else if (name == "RX" || name == "RY" || name == "RZ") {
                need(3);
                GateKind k = name == "RX" ? GateKind::RX : name == "RY" ? GateKind::RY : GateKind::RZ;
                g = Gate::rot(k, q, detail::parse_number(tok[2], line_no));
            } else if (name == "DELTA") {
                need(4);
                Complex eta(detail::parse_number(tok[2], line_no), detail::parse_number(tok[3], line_no));
                if (std::abs(eta) == 0) {
                    throw ParseError("DELTA needs a nonzero entry", line_no);
                }
                g = Gate::delta(q, eta);
            } else if (name == "U") {
                need(10);
                ComplexMatrix m(2, 2);
                for (int k = 0; k < 4; k++) {
                    m(k / 2, k % 2) = Complex(detail::parse_number(tok[2 + 2 * k], line_no),
                                              detail::parse_number(tok[3 + 2 * k], line_no));
                }
                if (!is_unitary(m, 1e-9)) {
                    throw ParseError("U entries are not unitary", line_no);
                }
                g = Gate::u2(q, m);
            } else {
                throw ParseError("unknown gate '" + name + "'", line_no);
            }
        }
        c.gates.push_back(g);
        if (end == text.size()) {
            break;
        }
    }
    if (declared >= 0) {
        if (max_q >= declared) {
            throw ParseError("gate index exceeds declared qubit count");
        }
        c.n_qubits = declared;
    } else {
        c.n_qubits = max_q + 1;
    }
    return c;
}

}  // namespace czsynth
