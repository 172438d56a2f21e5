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

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "czsynth/circuit.hpp"
#include "czsynth/decomp.hpp"
#include "czsynth/invariants.hpp"
#include "czsynth/io.hpp"
#include "czsynth/search.hpp"
#include "czsynth/synth3.hpp"

namespace czsynth {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitParse = 2, kExitPrecondition = 3 };

/// Unitary of a named builtin: identity, cz01, cz02, cz12, ccz, toffoli, peres.
inline ComplexMatrix builtin_operator(const std::string &name) {
    if (name == "identity") {
        return identity(3);
    }
    if (name == "cz01" || name == "cz02" || name == "cz12") {
        Circuit c(3);
        c.add(Gate::cz(name[2] - '0', name[3] - '0'));
        return simulate(c);
    }
    if (name == "ccz") {
        return multi_controlled_z(3).matrix();
    }
    if (name == "toffoli" || name == "peres") {
        return simulate(reference(name));
    }
    throw UnknownName("unknown builtin '" + name + "'");
}

namespace detail {

inline std::vector<int> parse_qubit_list(const std::string &text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        out.push_back(parse_qubit(item, 0));
    }
    return out;
}

inline std::string spectrum_text(const MuxSpectrum &s) {
    std::ostringstream o;
    o << "{";
    for (size_t i = 0; i < s.size(); i++) {
        o << (i ? ", " : "") << format_double(s.values[i].real()) << (s.values[i].imag() < 0 ? "-" : "+")
          << format_double(std::abs(s.values[i].imag())) << "i";
    }
    o << "}";
    return o.str();
}

struct Context {
    std::ostream &out;
    bool json = false;
};

inline DiagonalOperator load_target_diagonal(const std::string &diag_file, const std::string &op) {
    if (!diag_file.empty()) {
        return diagonal_from_json(parse_json(read_file(diag_file)));
    }
    return DiagonalOperator::from_matrix(builtin_operator(op));
}

inline int cmd_classify(Context &ctx, const std::string &diag_file, const std::string &op, const std::string &witness) {
    DiagonalOperator d = load_target_diagonal(diag_file, op);
    if (d.n_qubits() != 3) {
        throw Error("classify needs a three-qubit diagonal");
    }
    CostReport r = classify_3qdiag(d);
    if (!witness.empty()) {
        write_file(witness, emit(synth_3qdiag(d).circuit));
    }
    if (ctx.json) {
        Json j = to_json(r, witness);
        j["invariants"] = to_json(diag_invariants(d));
        ctx.out << j.dump(2) << "\n";
    } else {
        ctx.out << "cost: " << r.value_string() << "\n" << "rationale: " << r.rationale << "\n";
    }
    return kExitOk;
}

inline int cmd_synth(Context &ctx, const std::string &diag_file, const std::string &op, const std::string &gateset,
                     const std::string &out_file) {
    DiagonalOperator d = load_target_diagonal(diag_file, op);
    if (d.n_qubits() != 3) {
        throw Error("synth needs a three-qubit diagonal");
    }
    SynthResult r = synth_3qdiag(d, gateset == "cx" ? Gateset::cx : Gateset::cz);
    double residual = (DiagonalOperator::from_matrix(simulate(r.circuit)).entries * r.phase() - d.entries).norm();
    std::string text = emit(r.circuit);
    if (!out_file.empty()) {
        write_file(out_file, text);
    }
    if (ctx.json) {
        Json j{{"cost", r.cz_count},
               {"case", r.case_label},
               {"two_qubit_gates", r.circuit.two_qubit_count()},
               {"global_phase", complex_json(r.phase())},
               {"residual", residual},
               {"out", out_file.empty() ? Json(nullptr) : Json(out_file)}};
        if (out_file.empty()) {
            j["circuit"] = text;
        }
        ctx.out << j.dump(2) << "\n";
    } else if (out_file.empty()) {
        ctx.out << text;
    } else {
        ctx.out << "case " << r.case_label << ": " << r.cz_count << " two-qubit gates written to " << out_file
                << "\n";
    }
    return kExitOk;
}

inline int cmd_decompose(Context &ctx, const std::string &mode, int qubit, const std::string &file,
                         const std::string &out_dir) {
    ComplexMatrix u = UnitaryMatrix(matrix_from_json(parse_json(read_file(file))));
    int n = qubits_for_dim(u.rows());
    namespace fs = std::filesystem;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
    }
    auto save = [&](const std::string &name, const std::string &text) {
        if (!out_dir.empty()) {
            write_file((fs::path(out_dir) / name).string(), text);
        }
    };
    double residual = 0;
    Json j{{"mode", mode}};
    if (mode == "csd") {
        CsdResult r = csd(u, qubit);
        residual = (r.left * mux_ry_matrix(r.thetas, qubit, n) * r.right - u).norm();
        save("left.json", to_json(r.left).dump());
        save("right.json", to_json(r.right).dump());
        save("thetas.json", Json{{"qubit", qubit}, {"thetas", r.thetas}}.dump());
        j["thetas"] = r.thetas;
    } else if (mode == "demux") {
        DemuxResult r = demux(u, qubit);
        ComplexVector half(r.m.rows());
        for (Eigen::Index i = 0; i < half.size(); i++) {
            half[i] = std::polar(1.0, r.delta[(size_t)i]);
        }
        residual = (r.m * half.asDiagonal() * r.n - block(u, {qubit}, 0, Tolerance{1e-8})).norm() +
                   (r.m * half.conjugate().asDiagonal() * r.n - block(u, {qubit}, 1, Tolerance{1e-8})).norm();
        save("m.json", to_json(r.m).dump());
        save("n.json", to_json(r.n).dump());
        save("delta.json", Json{{"qubit", qubit}, {"delta", r.delta}}.dump());
        j["delta"] = r.delta;
    } else {
        Circuit c = qsd_synth(u);
        residual = dist_phase(simulate(c), u);
        save("circuit.txt", emit(c));
        j["two_qubit_gates"] = c.two_qubit_count();
    }
    j["residual"] = residual;
    j["out"] = out_dir.empty() ? Json(nullptr) : Json(out_dir);
    if (ctx.json) {
        ctx.out << j.dump(2) << "\n";
    } else {
        ctx.out << mode << " recomposition residual: " << format_double(residual) << "\n";
    }
    return residual < 1e-8 ? kExitOk : kExitVerifyFailed;
}

inline int cmd_spectrum(Context &ctx, int qubit, const std::string &file) {
    ComplexMatrix u = UnitaryMatrix(matrix_from_json(parse_json(read_file(file))));
    MuxSpectrum s = mux_spectrum(u, qubit);
    CostReport r = local_cost_from_spectrum(s);
    if (ctx.json) {
        Json vals = Json::array();
        for (const auto &v : s.values) {
            vals.push_back(complex_json(v));
        }
        Json j = to_json(r);
        j["qubit"] = qubit;
        j["spectrum"] = vals;
        ctx.out << j.dump(2) << "\n";
    } else {
        ctx.out << "spectrum: " << spectrum_text(s) << "\n" << "local cost: " << r.value_string() << "\n";
    }
    return kExitOk;
}

inline int cmd_verify(Context &ctx, const std::string &circ_file, const std::string &against,
                      const std::string &diag_on) {
    Circuit c = parse(read_file(circ_file));
    ComplexMatrix target = UnitaryMatrix(matrix_from_json(parse_json(read_file(against))));
    if (target.rows() != (Eigen::Index{1} << c.n_qubits)) {
        throw Error("circuit and target act on different qubit counts");
    }
    std::vector<int> qubits = parse_qubit_list(diag_on);
    double residual = dist_up_to_diagonal(simulate(c), target, qubits);
    bool pass = residual < 1e-8;
    if (ctx.json) {
        ctx.out << Json{{"residual", residual}, {"pass", pass}}.dump(2) << "\n";
    } else {
        ctx.out << (pass ? "PASS" : "FAIL") << " residual " << format_double(residual) << "\n";
    }
    return pass ? kExitOk : kExitVerifyFailed;
}

inline int cmd_search(Context &ctx, const std::string &target_name, int budget, const SearchConfig &cfg,
                      bool symmetric) {
    ComplexMatrix target = builtin_operator(target_name);
    SweepReport rep = sweep(target, target_name, budget, cfg, SymmetryFlags{symmetric, symmetric});
    Json j = to_json(rep);
    bool reached = rep.any_reached();
    double best = rep.min_residual();
    // A miss is only numerical evidence; it never proves a lower bound.
    std::string verdict = reached ? "REACHED" : (best > 0.05 ? "EVIDENCE: no topology below 0.05" : "INCONCLUSIVE");
    j["verdict"] = verdict;
    j["min_residual"] = best;
    if (ctx.json) {
        ctx.out << j.dump(2) << "\n";
    } else {
        ctx.out << target_name << " at " << budget << " CZs: " << rep.outcomes.size()
                << " topologies, best residual " << format_double(best) << ", " << verdict << "\n";
    }
    return kExitOk;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. Returns the process exit code.
inline int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"CZ/CNOT cost analysis and synthesis", "czsynth"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "Machine-readable output");

    std::string diag_file, op, witness, gateset = "cz", out_file;
    auto *classify = app.add_subcommand("classify", "Exact CZ-cost of a three-qubit diagonal");
    auto *cls_src = classify->add_option_group("source");
    cls_src->add_option("--diag", diag_file, "Diagonal JSON file");
    cls_src->add_option("--op", op, "Named builtin");
    cls_src->require_option(1);
    classify->add_option("--witness", witness, "Write a minimal circuit here");
    classify->add_flag("--json", json);

    auto *synth = app.add_subcommand("synth", "Minimal circuit for a three-qubit diagonal");
    auto *syn_src = synth->add_option_group("source");
    syn_src->add_option("--diag", diag_file, "Diagonal JSON file");
    syn_src->add_option("--op", op, "Named builtin");
    syn_src->require_option(1);
    synth->add_option("--gateset", gateset, "cz or cx")->check(CLI::IsMember({"cz", "cx"}));
    synth->add_option("--out", out_file, "Circuit text output");
    synth->add_flag("--json", json);

    std::string mode_file, out_dir;
    int qubit = 0;
    bool use_csd = false, use_demux = false, use_qsd = false;
    auto *decompose = app.add_subcommand("decompose", "Cosine-sine, demultiplexing or full decomposition");
    auto *modes = decompose->add_option_group("mode");
    modes->add_flag("--csd", use_csd);
    modes->add_flag("--demux", use_demux);
    modes->add_flag("--qsd", use_qsd);
    modes->require_option(1);
    decompose->add_option("--qubit", qubit, "Select qubit")->check(CLI::NonNegativeNumber);
    decompose->add_option("matrix", mode_file, "Matrix JSON file")->required();
    decompose->add_option("--out", out_dir, "Directory for factor files");
    decompose->add_flag("--json", json);

    std::string spec_file;
    auto *spectrum = app.add_subcommand("spectrum", "Mux-spectrum and local cost class");
    spectrum->add_option("--qubit", qubit, "Select qubit")->required()->check(CLI::NonNegativeNumber);
    spectrum->add_option("matrix", spec_file, "Matrix JSON file")->required();
    spectrum->add_flag("--json", json);

    std::string circ_file, against, diag_on;
    auto *verify = app.add_subcommand("verify", "Check a circuit against a matrix");
    verify->add_option("circuit", circ_file, "Circuit text file")->required();
    verify->add_option("--against", against, "Matrix JSON file")->required();
    verify->add_option("--up-to-diag-on", diag_on, "Allow a diagonal on these qubits, e.g. 0,2");
    verify->add_flag("--json", json);

    std::string target;
    int budget = 0;
    bool symmetric = false;
    SearchConfig cfg;
    auto *search = app.add_subcommand("search", "Numerical evidence for a CZ budget");
    search->add_option("--target", target, "Named builtin")->required();
    search->add_option("--czs", budget, "CZ budget")->required()->check(CLI::Range(0, 7));
    search->add_option("--restarts", cfg.restarts, "Restarts per topology")->check(CLI::PositiveNumber);
    search->add_option("--seed", cfg.seed, "RNG seed");
    search->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
    search->add_option("--max-iters", cfg.max_iters, "Sweeps per restart")->check(CLI::PositiveNumber);
    search->add_flag("--symmetric", symmetric, "Identify relabeled and reversed topologies");
    search->add_flag("--json", json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }

    detail::Context ctx{out, json};
    try {
        if (*classify) {
            return detail::cmd_classify(ctx, diag_file, op, witness);
        }
        if (*synth) {
            return detail::cmd_synth(ctx, diag_file, op, gateset, out_file);
        }
        if (*decompose) {
            return detail::cmd_decompose(ctx, use_csd ? "csd" : use_demux ? "demux" : "qsd", qubit, mode_file,
                                         out_dir);
        }
        if (*spectrum) {
            return detail::cmd_spectrum(ctx, qubit, spec_file);
        }
        if (*verify) {
            return detail::cmd_verify(ctx, circ_file, against, diag_on);
        }
        return detail::cmd_search(ctx, target, budget, cfg, symmetric);
    } catch (const ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitPrecondition;
    }
}

}  // namespace czsynth
