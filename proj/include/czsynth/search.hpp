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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "czsynth/circuit.hpp"
#include "czsynth/linalg.hpp"

namespace czsynth {

/// A CZ budget laid out as an ordered list of qubit pairs (first pair acts first).
struct Topology {
    int n_qubits = 0;
    std::vector<std::pair<int, int>> pairs;

    bool operator<(const Topology &o) const {
        return std::tie(n_qubits, pairs) < std::tie(o.n_qubits, o.pairs);
    }
    bool operator==(const Topology &o) const {
        return n_qubits == o.n_qubits && pairs == o.pairs;
    }
};

struct SymmetryFlags {
    /// Identify topologies that differ by a global relabeling of qubits.
    bool relabel = false;
    /// Identify a topology with its time reversal.
    bool reverse = false;
};

namespace detail {

inline std::pair<int, int> sorted_pair(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

/// Lexicographically least reordering reachable by swapping adjacent CZs on disjoint pairs.
inline std::vector<std::pair<int, int>> commutation_normal_form(std::vector<std::pair<int, int>> seq) {
    std::vector<std::pair<int, int>> out;
    while (!seq.empty()) {
        // A gate can move to the front if it is disjoint from everything before it.
        size_t best = seq.size();
        for (size_t i = 0; i < seq.size(); i++) {
            bool free = true;
            for (size_t j = 0; j < i && free; j++) {
                auto [a, b] = seq[i];
                auto [c, d] = seq[j];
                free = a != c && a != d && b != c && b != d;
            }
            if (free && (best == seq.size() || seq[i] < seq[best])) {
                best = i;
            }
        }
        out.push_back(seq[best]);
        seq.erase(seq.begin() + (std::ptrdiff_t)best);
    }
    return out;
}

inline std::vector<std::pair<int, int>> canonical_pairs(const std::vector<std::pair<int, int>> &seq, int n,
                                                        SymmetryFlags flags) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::pair<int, int>> best;
    bool have = false;
    do {
        for (int rev = 0; rev < (flags.reverse ? 2 : 1); rev++) {
            std::vector<std::pair<int, int>> t;
            for (auto [a, b] : seq) {
                t.push_back(sorted_pair(perm[(size_t)a], perm[(size_t)b]));
            }
            if (rev) {
                std::reverse(t.begin(), t.end());
            }
            t = commutation_normal_form(std::move(t));
            if (!have || t < best) {
                best = std::move(t);
                have = true;
            }
        }
    } while (flags.relabel && std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace detail

/// Canonical representative of `t` under CZ commutation and the requested symmetries.
inline Topology canonical_topology(const Topology &t, SymmetryFlags flags = {}) {
    return Topology{t.n_qubits, detail::canonical_pairs(t.pairs, t.n_qubits, flags)};
}

/// Every CZ arrangement of the given length, one per equivalence class. Adjacent repeats of the
/// same pair are kept, so a budget-k solution always embeds at budget k + 2.
inline std::vector<Topology> enumerate_topologies(int n_qubits, int budget, SymmetryFlags flags = {}) {
    if (n_qubits < 2 || n_qubits > 4 || budget < 0 || budget > 7) {
        throw Error("enumerate_topologies supports 2..4 qubits and budgets 0..7");
    }
    std::vector<std::pair<int, int>> all_pairs;
    for (int a = 0; a < n_qubits; a++) {
        for (int b = a + 1; b < n_qubits; b++) {
            all_pairs.emplace_back(a, b);
        }
    }
    std::set<std::vector<std::pair<int, int>>> seen;
    std::vector<size_t> digits((size_t)budget, 0);
    while (true) {
        std::vector<std::pair<int, int>> seq;
        for (size_t d : digits) {
            seq.push_back(all_pairs[d]);
        }
        seen.insert(detail::canonical_pairs(seq, n_qubits, flags));
        size_t i = 0;
        while (i < digits.size() && ++digits[i] == all_pairs.size()) {
            digits[i++] = 0;
        }
        if (i == digits.size()) {
            break;
        }
    }
    std::vector<Topology> out;
    for (const auto &s : seen) {
        out.push_back(Topology{n_qubits, s});
    }
    return out;
}

struct SearchConfig {
    int restarts = 200;
    /// Coordinate sweeps per restart.
    int max_iters = 3000;
    uint64_t seed = 1;
    double threshold = 1e-6;
    /// A restart ends when a sweep improves |tr(T†C)| by less than stall·(dim − |tr(T†C)|),
    /// i.e. when closing the remaining gap at the current rate would take over 1/stall sweeps.
    double stall = 1e-5;
    int threads = 1;
    /// Skip restarts numbered after the first one that reaches the threshold.
    bool stop_on_reach = true;
};

struct SearchOutcome {
    Topology topology;
    double best_residual = std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
    bool reached = false;
    int best_restart = -1;
    int restarts_run = 0;
};

/// The parameterized circuit: RZ·RY·RZ on every qubit, then after each CZ the same on both of
/// its qubits. Parameters are consumed in gate order.
inline Circuit ansatz_circuit(const Topology &topo, const std::vector<double> &params) {
    Circuit c(topo.n_qubits);
    size_t k = 0;
    auto layer = [&](int q) {
        c.add(Gate::rz(q, params.at(k))).add(Gate::ry(q, params.at(k + 1))).add(Gate::rz(q, params.at(k + 2)));
        k += 3;
    };
    for (int q = 0; q < topo.n_qubits; q++) {
        layer(q);
    }
    for (auto [a, b] : topo.pairs) {
        c.add(Gate::cz(a, b));
        layer(a);
        layer(b);
    }
    return c;
}

inline size_t ansatz_parameter_count(const Topology &topo) {
    return 3 * ((size_t)topo.n_qubits + 2 * topo.pairs.size());
}

namespace detail {

struct Slot {
    enum Kind { cz, rz, ry } kind;
    int q0;
    int q1;
};

inline std::vector<Slot> ansatz_slots(const Topology &topo) {
    std::vector<Slot> s;
    auto layer = [&](int q) {
        s.push_back({Slot::rz, q, -1});
        s.push_back({Slot::ry, q, -1});
        s.push_back({Slot::rz, q, -1});
    };
    for (int q = 0; q < topo.n_qubits; q++) {
        layer(q);
    }
    for (auto [a, b] : topo.pairs) {
        s.push_back({Slot::cz, a, b});
        layer(a);
        layer(b);
    }
    return s;
}

/// 2×2 matrix of RZ/RY at angle θ: cos θ·I + sin θ·K with K = iZ or iY.
inline std::array<Complex, 4> rotation(Slot::Kind k, double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    if (k == Slot::rz) {
        return {Complex(c, s), 0, 0, Complex(c, -s)};
    }
    return {c, s, -s, c};
}

/// Dense row-major matrix with in-place one-qubit updates; avoids allocation in the inner loop.
struct Work {
    int n;
    int dim;
    std::vector<Complex> m;

    explicit Work(int n_qubits) : n(n_qubits), dim(1 << n_qubits), m((size_t)(dim * dim)) {
    }
    Complex &at(int r, int c) {
        return m[(size_t)(r * dim + c)];
    }
    void left(const Slot &s, const std::array<Complex, 4> &g) {
        int mq = 1 << (n - 1 - s.q0);
        if (s.kind == Slot::cz) {
            int mb = 1 << (n - 1 - s.q1);
            for (int r = 0; r < dim; r++) {
                if ((r & mq) && (r & mb)) {
                    for (int c = 0; c < dim; c++) {
                        at(r, c) = -at(r, c);
                    }
                }
            }
            return;
        }
        for (int r = 0; r < dim; r++) {
            if (r & mq) {
                continue;
            }
            for (int c = 0; c < dim; c++) {
                Complex a = at(r, c), b = at(r | mq, c);
                at(r, c) = g[0] * a + g[1] * b;
                at(r | mq, c) = g[2] * a + g[3] * b;
            }
        }
    }
    /// m ← m · g†
    void right_adjoint(const Slot &s, const std::array<Complex, 4> &g) {
        int mq = 1 << (n - 1 - s.q0);
        if (s.kind == Slot::cz) {
            int mb = 1 << (n - 1 - s.q1);
            for (int c = 0; c < dim; c++) {
                if ((c & mq) && (c & mb)) {
                    for (int r = 0; r < dim; r++) {
                        at(r, c) = -at(r, c);
                    }
                }
            }
            return;
        }
        Complex h00 = std::conj(g[0]), h01 = std::conj(g[2]), h10 = std::conj(g[1]), h11 = std::conj(g[3]);
        for (int c = 0; c < dim; c++) {
            if (c & mq) {
                continue;
            }
            for (int r = 0; r < dim; r++) {
                Complex a = at(r, c), b = at(r, c | mq);
                at(r, c) = a * h00 + b * h10;
                at(r, c | mq) = a * h01 + b * h11;
            }
        }
    }
    /// 2×2 partial trace over every qubit except q: red[a][b] = Σ m(a·rest, b·rest).
    std::array<Complex, 4> reduce(int q) const {
        int mq = 1 << (n - 1 - q);
        std::array<Complex, 4> red{};
        for (int r = 0; r < dim; r++) {
            if (r & mq) {
                continue;
            }
            red[0] += m[(size_t)(r * dim + r)];
            red[1] += m[(size_t)(r * dim + (r | mq))];
            red[2] += m[(size_t)((r | mq) * dim + r)];
            red[3] += m[(size_t)((r | mq) * dim + (r | mq))];
        }
        return red;
    }
};

/// Maximizes |tr(T† C)| by exact coordinate updates. For one angle the trace is x·cos θ + y·sin θ,
/// whose modulus is maximized in closed form. Returns the final |tr|.
inline double coordinate_ascent(const ComplexMatrix &target_adj, const std::vector<Slot> &slots,
                                std::vector<double> &params, const SearchConfig &cfg, int n) {
    Work w(n);
    double dim = (double)w.dim;
    double value = 0;
    double goal = dim - 0.5 * (cfg.threshold * 0.01) * (cfg.threshold * 0.01);
    std::vector<std::array<Complex, 4>> mats(slots.size());
    for (int iter = 0; iter < cfg.max_iters; iter++) {
        size_t k = 0;
        for (size_t i = 0; i < slots.size(); i++) {
            mats[i] = slots[i].kind == Slot::cz ? std::array<Complex, 4>{} : rotation(slots[i].kind, params[k++]);
        }
        // E = T† · C · g_0†, where C applies the slots in order.
        Work c(n);
        for (int i = 0; i < w.dim; i++) {
            c.at(i, i) = 1;
        }
        for (size_t i = 0; i < slots.size(); i++) {
            c.left(slots[i], mats[i]);
        }
        for (int r = 0; r < w.dim; r++) {
            for (int col = 0; col < w.dim; col++) {
                Complex acc = 0;
                for (int j = 0; j < w.dim; j++) {
                    acc += target_adj(r, j) * c.at(j, col);
                }
                w.at(r, col) = acc;
            }
        }
        w.right_adjoint(slots[0], mats[0]);

        double before = value;
        k = 0;
        for (size_t i = 0; i < slots.size(); i++) {
            const Slot &s = slots[i];
            if (s.kind != Slot::cz) {
                auto red = w.reduce(s.q0);
                Complex x = red[0] + red[3];
                // tr(K·E_red) for K = iZ = diag(i,−i) or K = iY = [[0,1],[−1,0]].
                Complex y = s.kind == Slot::rz ? Complex(0, 1) * (red[0] - red[3]) : red[2] - red[1];
                double xx = std::norm(x), yy = std::norm(y), xy = std::real(std::conj(x) * y);
                double half_diff = 0.5 * (xx - yy);
                double theta = 0.5 * std::atan2(xy, half_diff);
                params[k] = theta;
                mats[i] = rotation(s.kind, theta);
                value = std::sqrt(std::max(0.0, 0.5 * (xx + yy) + std::hypot(half_diff, xy)));
                k++;
            }
            if (i + 1 < slots.size()) {
                w.left(s, mats[i]);
                w.right_adjoint(slots[i + 1], mats[i + 1]);
            }
        }
        if (value >= goal || value - before < cfg.stall * (dim - value) + 1e-15 * dim) {
            break;
        }
    }
    return value;
}

inline uint64_t stream_seed(uint64_t seed, uint64_t topo, uint64_t restart) {
    std::seed_seq seq{(uint32_t)seed, (uint32_t)(seed >> 32), (uint32_t)topo, (uint32_t)restart};
    std::array<uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (uint64_t)out[0] << 32 | out[1];
}

struct RestartResult {
    double residual;
    std::vector<double> params;
};

inline RestartResult run_restart(const ComplexMatrix &target, const Topology &topo, const SearchConfig &cfg,
                                 uint64_t topo_index, int restart) {
    std::mt19937_64 rng(stream_seed(cfg.seed, topo_index, (uint64_t)restart));
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::vector<double> params(ansatz_parameter_count(topo));
    for (auto &p : params) {
        p = angle(rng);
    }
    coordinate_ascent(target.adjoint(), ansatz_slots(topo), params, cfg, topo.n_qubits);
    // Report the residual of an independent re-simulation, not the optimizer's running value.
    return {dist_phase(simulate(ansatz_circuit(topo, params)), target), std::move(params)};
}

}  // namespace detail

/// Best phase-insensitive residual reachable with `topo` over cfg.restarts random starts.
/// Deterministic given cfg.seed and `topo_index`, regardless of thread count.
inline SearchOutcome optimize(const ComplexMatrix &target, const Topology &topo, const SearchConfig &cfg,
                              uint64_t topo_index = 0) {
    if (target.rows() != (Eigen::Index{1} << topo.n_qubits)) {
        throw Error("target dimension does not match topology");
    }
    if (cfg.restarts < 1) {
        throw Error("restarts must be at least 1");
    }
    std::vector<std::optional<detail::RestartResult>> results((size_t)cfg.restarts);
    std::atomic<int> next{0};
    std::atomic<int> first_reach{cfg.restarts};
    auto worker = [&] {
        while (true) {
            int r = next.fetch_add(1);
            if (r >= cfg.restarts || (cfg.stop_on_reach && r > first_reach.load())) {
                return;
            }
            results[(size_t)r] = detail::run_restart(target, topo, cfg, topo_index, r);
            if (results[(size_t)r]->residual < cfg.threshold) {
                int cur = first_reach.load();
                while (r < cur && !first_reach.compare_exchange_weak(cur, r)) {
                }
            }
        }
    };
    int threads = std::max(1, std::min(cfg.threads, cfg.restarts));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; t++) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    SearchOutcome out;
    out.topology = topo;
    int last = cfg.stop_on_reach ? std::min(first_reach.load(), cfg.restarts - 1) : cfg.restarts - 1;
    for (int r = 0; r <= last; r++) {
        const auto &res = results[(size_t)r];
        out.restarts_run++;
        if (res->residual < out.best_residual) {
            out.best_residual = res->residual;
            out.best_params = res->params;
            out.best_restart = r;
        }
    }
    out.reached = out.best_residual < cfg.threshold;
    return out;
}

struct SweepReport {
    std::string target;
    int budget = 0;
    std::vector<SearchOutcome> outcomes;

    bool any_reached() const {
        return std::any_of(outcomes.begin(), outcomes.end(), [](const auto &o) { return o.reached; });
    }
    double min_residual() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto &o : outcomes) {
            m = std::min(m, o.best_residual);
        }
        return m;
    }
};

/// Runs optimize on every topology of the given budget. Threads are spread over topologies.
inline SweepReport sweep(const ComplexMatrix &target, const std::string &name, int budget, const SearchConfig &cfg,
                         SymmetryFlags flags = {}) {
    int n = qubits_for_dim(target.rows());
    std::vector<Topology> topos = enumerate_topologies(n, budget, flags);
    SweepReport rep;
    rep.target = name;
    rep.budget = budget;
    rep.outcomes.resize(topos.size());
    SearchConfig inner = cfg;
    inner.threads = 1;
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < topos.size(); i = next.fetch_add(1)) {
            rep.outcomes[i] = optimize(target, topos[i], inner, i);
        }
    };
    int threads = std::max(1, std::min<int>(cfg.threads, (int)topos.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; t++) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    return rep;
}

}  // namespace czsynth
