// Copyright 2026 The Causametrics Authors
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

#ifndef CAUSAMETRICS_JSON_IO_HPP
#define CAUSAMETRICS_JSON_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "causametrics/harmonic.hpp"
#include "causametrics/measures.hpp"
#include "causametrics/process_matrix.hpp"
#include "causametrics/protocol.hpp"
#include "causametrics/reconstruct.hpp"

namespace causametrics {

using nlohmann::json;

/// All numeric output uses 12 significant digits; emission is by hand so the
/// bytes are identical for identical values regardless of the JSON library.
inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline std::string fmt_bool(bool b) {
    return b ? "true" : "false";
}

// ---------------------------------------------------------------------------
// Parsing (inputs arrive as ordinary JSON).

inline json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error &e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

inline Complex parse_complex_pair(const json &j, const char *what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::invalid_argument(std::string(what) + ": entries must be [re, im] pairs");
    }
    return Complex(j[0].get<double>(), j[1].get<double>());
}

/// Matrix JSON: {"rows": n, "cols": m, "entries": [[re, im], ...]} row-major.
inline ComplexMatrix parse_matrix(const json &j) {
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries")) {
        throw std::invalid_argument("matrix JSON needs rows, cols and entries");
    }
    Index rows = j["rows"].get<Index>();
    Index cols = j["cols"].get<Index>();
    const auto &entries = j["entries"];
    if (rows <= 0 || cols <= 0 || !entries.is_array() ||
        static_cast<Index>(entries.size()) != rows * cols) {
        throw std::invalid_argument("matrix JSON: entries length must equal rows * cols");
    }
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index k = 0; k < cols; ++k) {
            m(i, k) = parse_complex_pair(entries[static_cast<std::size_t>(i * cols + k)],
                                         "matrix JSON");
        }
    }
    return m;
}

inline std::string matrix_to_json(const ComplexMatrix &m) {
    std::ostringstream out;
    out << "{\"rows\": " << m.rows() << ", \"cols\": " << m.cols() << ", \"entries\": [";
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index k = 0; k < m.cols(); ++k) {
            if (i != 0 || k != 0) {
                out << ", ";
            }
            out << "[" << fmt_double(m(i, k).real()) << ", " << fmt_double(m(i, k).imag()) << "]";
        }
    }
    out << "]}";
    return out.str();
}

/// ProcessMatrix JSON: {"systems": [{"label": "a1", "dim": n}, ...] in the
/// fixed order a1, a2, b1, b2, "matrix": Matrix-JSON}.
inline ProcessMatrix parse_process_matrix(const json &j) {
    if (!j.contains("systems") || !j.contains("matrix")) {
        throw std::invalid_argument("process matrix JSON needs systems and matrix");
    }
    const auto &systems = j["systems"];
    static const std::array<const char *, 4> expected{"a1", "a2", "b1", "b2"};
    if (!systems.is_array() || systems.size() != 4) {
        throw std::invalid_argument("process matrix JSON: systems must list a1, a2, b1, b2");
    }
    std::array<Index, 4> dims{};
    for (std::size_t k = 0; k < 4; ++k) {
        if (systems[k]["label"].get<std::string>() != expected[k]) {
            throw std::invalid_argument(
                "process matrix JSON: systems must be labeled a1, a2, b1, b2 in order");
        }
        dims[k] = systems[k]["dim"].get<Index>();
    }
    return ProcessMatrix(parse_matrix(j["matrix"]), dims[0], dims[1], dims[2], dims[3]);
}

inline std::string process_matrix_to_json(const ProcessMatrix &w) {
    std::ostringstream out;
    out << "{\"systems\": [";
    for (std::size_t k = 0; k < w.systems.size(); ++k) {
        if (k) {
            out << ", ";
        }
        out << "{\"label\": \"" << w.systems[k].label << "\", \"dim\": " << w.systems[k].dim
            << "}";
    }
    out << "], \"matrix\": " << matrix_to_json(w.matrix) << "}";
    return out.str();
}

/// HarmonicModel JSON:
///   {"alpha": [[re,im],[re,im],[re,im]], "dim": d,
///    "psi": {"preset": "product"|"mixed_b1"}
///         | {"vector": [[re,im],...], "e3_dim": k}}
inline HarmonicModel parse_harmonic_model(const json &j) {
    if (!j.contains("alpha") || !j.contains("dim") || !j.contains("psi")) {
        throw std::invalid_argument("model JSON needs alpha, dim and psi");
    }
    const auto &aj = j["alpha"];
    if (!aj.is_array() || aj.size() != 3) {
        throw std::invalid_argument("model JSON: alpha must have three entries");
    }
    std::array<Complex, 3> alpha;
    for (std::size_t k = 0; k < 3; ++k) {
        alpha[k] = parse_complex_pair(aj[k], "model JSON alpha");
    }
    Index d = j["dim"].get<Index>();
    const auto &psi = j["psi"];
    if (psi.contains("preset")) {
        std::string preset = psi["preset"].get<std::string>();
        if (preset == "product") {
            return make_harmonic_model(alpha, d, PsiPreset::Product);
        }
        if (preset == "mixed_b1") {
            return make_harmonic_model(alpha, d, PsiPreset::MixedB1);
        }
        throw std::invalid_argument("model JSON: unknown psi preset '" + preset + "'");
    }
    if (psi.contains("vector") && psi.contains("e3_dim")) {
        Index e3 = psi["e3_dim"].get<Index>();
        const auto &vj = psi["vector"];
        ComplexVector v(static_cast<Index>(vj.size()));
        for (std::size_t k = 0; k < vj.size(); ++k) {
            v(static_cast<Index>(k)) = parse_complex_pair(vj[k], "model JSON psi");
        }
        return make_harmonic_model(alpha, d, std::move(v), e3);
    }
    throw std::invalid_argument("model JSON: psi needs a preset or a vector with e3_dim");
}

// ---------------------------------------------------------------------------
// Report emission.

inline std::string validity_report_to_json(const ValidityReport &r) {
    std::ostringstream out;
    out << "{\"psd\": " << fmt_bool(r.psd) << ", \"trace_ok\": " << fmt_bool(r.trace_ok)
        << ", \"normalized\": " << fmt_bool(r.normalized) << ", \"residuals\": {"
        << "\"hermiticity\": " << fmt_double(r.hermiticity_residual)
        << ", \"min_eigenvalue\": " << fmt_double(r.min_eigenvalue)
        << ", \"trace\": " << fmt_double(r.trace_residual)
        << ", \"base_probability\": " << fmt_double(r.base_probability_residual)
        << ", \"affine\": " << fmt_double(r.affine_residual) << "}}";
    return out.str();
}

inline std::string signal_result_to_json(const SignalTestResult &r) {
    std::ostringstream out;
    out << "{\"signals\": " << fmt_bool(r.signals) << ", \"residual\": " << fmt_double(r.residual)
        << "}";
    return out.str();
}

inline std::string oracle_report_to_json(const OracleReport &r) {
    std::ostringstream out;
    out << "{\"formula\": " << fmt_double(r.formula)
        << ", \"canonical\": " << fmt_double(r.canonical)
        << ", \"sampled_max\": " << fmt_double(r.sampled_max)
        << ", \"n_samples\": " << r.n_samples << ", \"seed\": " << r.seed
        << ", \"agrees\": " << fmt_bool(r.agrees) << "}";
    return out.str();
}

inline std::string reconstruction_to_json(const ReconstructionResult &r) {
    std::ostringstream out;
    out << "{\"alpha_abs\": [" << fmt_double(r.alpha_abs[0]) << ", " << fmt_double(r.alpha_abs[1])
        << ", " << fmt_double(r.alpha_abs[2]) << "], \"dim\": ";
    if (r.dim) {
        out << *r.dim;
    } else {
        out << "null";
    }
    out << ", \"diagnostics\": {\"threshold_fwd\": " << fmt_double(r.diagnostics.threshold_fwd)
        << ", \"threshold_bwd\": " << fmt_double(r.diagnostics.threshold_bwd)
        << ", \"norm_residual\": " << fmt_double(r.diagnostics.norm_residual)
        << ", \"dim_residual\": " << fmt_double(r.diagnostics.dim_residual) << "}}";
    return out.str();
}

inline std::string axiom_report_to_json(const AxiomReport &r) {
    std::ostringstream out;
    out << "{\"monotone_checks\": " << r.monotone_checks
        << ", \"monotone_violations\": " << r.monotone_violations
        << ", \"worst_violation\": " << fmt_double(r.worst_violation)
        << ", \"nonneg_ok\": " << fmt_bool(r.nonneg_ok)
        << ", \"axiom3_ok\": " << fmt_bool(r.axiom3_ok) << ", \"normalized_range_ok\": ";
    if (r.normalized_range_ok) {
        out << fmt_bool(*r.normalized_range_ok);
    } else {
        out << "null";
    }
    out << ", \"unitary_invariance_ok\": " << fmt_bool(r.unitary_invariance_ok)
        << ", \"axiom1_level\": \"" << r.axiom1_level << "\"}";
    return out.str();
}

inline std::string quantum_signal_to_json(const QuantumSignalResult &r) {
    std::ostringstream out;
    out << "{\"signals\": " << fmt_bool(r.signals) << ", \"witness_epsilon\": ";
    if (r.witness_epsilon) {
        out << fmt_double(*r.witness_epsilon);
    } else {
        out << "null";
    }
    out << "}";
    return out.str();
}

inline std::string sampled_quantum_signal_to_json(const SampledQuantumSignal &r) {
    std::ostringstream out;
    out << "{\"witness_found\": " << fmt_bool(r.witness_found) << ", \"witness_epsilon\": ";
    if (r.witness_epsilon) {
        out << fmt_double(*r.witness_epsilon);
    } else {
        out << "null";
    }
    out << ", \"best_fidelity\": " << fmt_double(r.best_fidelity) << "}";
    return out.str();
}

// ---------------------------------------------------------------------------
// Capacity tables and sampled profiles (CSV).

/// Writes the capacity table: one row per grid epsilon. Subspace columns are
/// `nan` when the model violates the corresponding hypothesis.
inline void write_capacity_table(std::ostream &out, const HarmonicModel &model,
                                 std::span<const double> eps_grid) {
    out << "epsilon,q_ent_fwd,q_ent_bwd,q_sub_fwd,q_sub_bwd,baseline\n";
    bool fwd_ok = rho_b1_is_maximally_mixed(model);
    bool bwd_ok = rho_a1_is_maximally_mixed(model);
    for (double eps : eps_grid) {
        CapacityQuery fwd = CapacityQuery::from_model(model, Task::Ent, Direction::AtoB, eps);
        CapacityQuery bwd = CapacityQuery::from_model(model, Task::Ent, Direction::BtoA, eps);
        out << fmt_double(eps) << "," << fmt_double(q_ent(fwd)) << "," << fmt_double(q_ent(bwd))
            << ",";
        if (fwd_ok) {
            CapacityQuery s = fwd;
            s.task = Task::Sub;
            out << fmt_double(q_sub(s));
        } else {
            out << "nan";
        }
        out << ",";
        if (bwd_ok) {
            CapacityQuery s = bwd;
            s.task = Task::Sub;
            out << fmt_double(q_sub(s));
        } else {
            out << "nan";
        }
        out << "," << fmt_double(q_ent_nonsignalling_baseline(model.dim, eps)) << "\n";
    }
}

/// Reads an (epsilon, q) profile CSV; an optional header line is skipped.
inline std::vector<std::pair<double, double>> parse_profile_csv(std::istream &in) {
    std::vector<std::pair<double, double>> samples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double eps = 0.0, q = 0.0;
        if (!(row >> eps >> q)) {
            if (samples.empty()) {
                continue;  // header
            }
            throw std::invalid_argument("profile CSV: malformed row '" + line + "'");
        }
        samples.emplace_back(eps, q);
    }
    if (samples.empty()) {
        throw std::invalid_argument("profile CSV: no samples");
    }
    return samples;
}

}  // namespace causametrics

#endif  // CAUSAMETRICS_JSON_IO_HPP
