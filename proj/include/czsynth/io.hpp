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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "czsynth/invariants.hpp"
#include "czsynth/linalg.hpp"
#include "czsynth/search.hpp"

namespace czsynth {

using Json = nlohmann::json;

namespace detail {

inline std::vector<double> number_array(const Json &j, const char *key, size_t expect) {
    if (!j.contains(key) || !j[key].is_array()) {
        throw ParseError(std::string("missing array field \"") + key + "\"");
    }
    const Json &a = j[key];
    if (a.size() != expect) {
        throw ParseError(std::string("field \"") + key + "\" has " + std::to_string(a.size()) + " entries, expected " +
                         std::to_string(expect));
    }
    std::vector<double> out;
    for (const auto &v : a) {
        if (!v.is_number()) {
            throw ParseError(std::string("non-numeric entry in \"") + key + "\"");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

inline int qubit_field(const Json &j) {
    if (!j.contains("n") || !j["n"].is_number_integer()) {
        throw ParseError("missing integer field \"n\"");
    }
    int n = j["n"].get<int>();
    if (n < 0 || n > kMaxQubits) {
        throw ParseError("qubit count " + std::to_string(n) + " out of range");
    }
    return n;
}

}  // namespace detail

inline Json parse_json(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error("cannot write '" + path + "'");
    }
}

inline bool is_diagonal_json(const Json &j) {
    return j.is_object() && j.contains("diag_re");
}

/// Full-matrix JSON: row-major "re"/"im" of length 4^n. The diagonal variant is expanded.
inline ComplexMatrix matrix_from_json(const Json &j) {
    if (!j.is_object()) {
        throw ParseError("operator JSON must be an object");
    }
    int n = detail::qubit_field(j);
    Eigen::Index dim = Eigen::Index{1} << n;
    if (is_diagonal_json(j)) {
        auto re = detail::number_array(j, "diag_re", (size_t)dim);
        auto im = detail::number_array(j, "diag_im", (size_t)dim);
        ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; i++) {
            m(i, i) = Complex(re[(size_t)i], im[(size_t)i]);
        }
        return m;
    }
    auto re = detail::number_array(j, "re", (size_t)(dim * dim));
    auto im = detail::number_array(j, "im", (size_t)(dim * dim));
    ComplexMatrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; r++) {
        for (Eigen::Index c = 0; c < dim; c++) {
            size_t k = (size_t)(r * dim + c);
            m(r, c) = Complex(re[k], im[k]);
        }
    }
    return m;
}

/// Accepts the diagonal variant or a full matrix that is diagonal.
inline DiagonalOperator diagonal_from_json(const Json &j) {
    return DiagonalOperator::from_matrix(matrix_from_json(j));
}

inline Json to_json(const ComplexMatrix &m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    }
    return Json{{"n", qubits_for_dim(m.rows())}, {"re", re}, {"im", im}};
}

inline Json to_json(const DiagonalOperator &d) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index i = 0; i < d.size(); i++) {
        re.push_back(d[i].real());
        im.push_back(d[i].imag());
    }
    return Json{{"n", d.n_qubits()}, {"diag_re", re}, {"diag_im", im}};
}

inline Json complex_json(Complex z) {
    return Json::array({z.real(), z.imag()});
}

/// {"cost": int or "≥k", "rationale": ..., "witness_file": path or null}.
inline Json to_json(const CostReport &r, const std::string &witness_file = "") {
    Json j;
    if (r.lower_bound) {
        j["cost"] = r.value_string();
    } else {
        j["cost"] = r.cost;
    }
    j["rationale"] = r.rationale;
    j["witness_file"] = witness_file.empty() ? Json(nullptr) : Json(witness_file);
    return j;
}

inline Json to_json(const DiagInvariants &s) {
    return Json{{"lambda", {complex_json(s.lambda[0]), complex_json(s.lambda[1]), complex_json(s.lambda[2])}},
                {"xi", complex_json(s.xi)}};
}

inline Json to_json(const SweepReport &rep) {
    Json topos = Json::array();
    for (const auto &o : rep.outcomes) {
        Json pairs = Json::array();
        for (auto [a, b] : o.topology.pairs) {
            pairs.push_back({a, b});
        }
        topos.push_back({{"pairs", pairs},
                         {"best_residual", o.best_residual},
                         {"reached", o.reached},
                         {"restarts_run", o.restarts_run}});
    }
    return Json{{"target", rep.target}, {"budget", rep.budget}, {"topologies", topos}};
}

}  // namespace czsynth
