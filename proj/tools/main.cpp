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

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "causametrics/causametrics.hpp"

namespace {

using namespace causametrics;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

void emit(const std::string &text, const std::string &out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw std::invalid_argument("cannot write to " + out_path);
    }
    out << text << "\n";
}

Direction parse_direction(const std::string &s) {
    if (s == "fwd" || s == "a2b" || s == "AtoB") {
        return Direction::AtoB;
    }
    if (s == "bwd" || s == "b2a" || s == "BtoA") {
        return Direction::BtoA;
    }
    throw CLI::ValidationError("--dir", "direction must be fwd or bwd");
}

Task parse_task(const std::string &s) {
    if (s == "ent") {
        return Task::Ent;
    }
    if (s == "sub") {
        return Task::Sub;
    }
    throw CLI::ValidationError("--task", "task must be ent or sub");
}

MeasureKind parse_measure_kind(const std::string &s) {
    if (s == "zero") {
        return MeasureKind::Zero;
    }
    if (s == "signalling") {
        return MeasureKind::Signalling;
    }
    if (s == "q_signalling") {
        return MeasureKind::QSignalling;
    }
    if (s == "capacity") {
        return MeasureKind::Capacity;
    }
    throw CLI::ValidationError("--measure",
                               "measure must be zero, signalling, q_signalling or capacity");
}

struct CommonModelInput {
    std::string model_path;

    HarmonicModel load() const {
        return parse_harmonic_model(read_json_file(model_path));
    }
};

int run(int argc, char **argv) {
    CLI::App app{"Process-matrix correlations, one-shot capacities and causality measures"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "write output to a file instead of stdout");

    // validate ---------------------------------------------------------------
    auto *validate_cmd = app.add_subcommand("validate", "check process-matrix validity");
    std::string validate_in;
    double validate_tol = kDefaultTol;
    validate_cmd->add_option("--in", validate_in, "process matrix JSON")->required();
    validate_cmd->add_option("--tol", validate_tol, "numerical tolerance");

    // prob -------------------------------------------------------------------
    auto *prob_cmd = app.add_subcommand("prob", "joint outcome probability (Born rule)");
    std::string prob_in, prob_ma, prob_mb;
    prob_cmd->add_option("--in", prob_in, "process matrix JSON")->required();
    prob_cmd->add_option("--ma", prob_ma, "Choi of A's instrument element (matrix JSON)")
        ->required();
    prob_cmd->add_option("--mb", prob_mb, "Choi of B's instrument element (matrix JSON)")
        ->required();

    // signal -----------------------------------------------------------------
    auto *signal_cmd = app.add_subcommand("signal", "linear signalling test");
    std::string signal_in, signal_dir = "fwd";
    double signal_tol = kDefaultTol;
    signal_cmd->add_option("--in", signal_in, "process matrix JSON")->required();
    signal_cmd->add_option("--dir,--direction", signal_dir, "fwd (A to B) or bwd (B to A)");
    signal_cmd->add_option("--tol", signal_tol, "signalling tolerance");

    // build ------------------------------------------------------------------
    auto *build_cmd = app.add_subcommand("build", "construct a harmonic-model process matrix");
    std::string build_model;
    int build_branch = 0;
    build_cmd->add_option("--model", build_model, "harmonic model JSON")->required();
    build_cmd->add_option("--branch", build_branch, "emit branch 1, 2 or 3 instead of the mixture")
        ->check(CLI::Range(1, 3));

    // capacity ---------------------------------------------------------------
    auto *cap_cmd = app.add_subcommand("capacity", "closed-form one-shot capacity");
    std::string cap_task = "ent", cap_dir = "fwd", cap_model;
    double cap_eps = 0.0, cap_p1 = -1.0, cap_p2 = 0.0;
    Index cap_dim = 0;
    bool cap_assume_mixed = false, cap_normalized = false;
    cap_cmd->add_option("--task", cap_task, "ent or sub");
    cap_cmd->add_option("--dir,--direction", cap_dir, "fwd or bwd");
    cap_cmd->add_option("--eps,--epsilon", cap_eps, "error tolerance in [0,1]")->required();
    cap_cmd->add_option("--model", cap_model, "harmonic model JSON");
    cap_cmd->add_option("--p1", cap_p1, "branch-1 weight (instead of --model)");
    cap_cmd->add_option("--p2", cap_p2, "branch-2 weight (backward direction)");
    cap_cmd->add_option("--dim", cap_dim, "subsystem dimension (with --p1)");
    cap_cmd->add_flag("--assume-mixed", cap_assume_mixed,
                      "assert the subspace hypothesis for parameter queries");
    cap_cmd->add_flag("--normalized", cap_normalized, "divide by log2(dim)");

    // capacity-table ----------------------------------------------------------
    auto *table_cmd = app.add_subcommand("capacity-table", "CSV capacity sweep over epsilon");
    std::string table_model;
    int table_points = 101;
    double table_lo = 0.005, table_hi = 0.995;
    table_cmd->add_option("--model", table_model, "harmonic model JSON")->required();
    table_cmd->add_option("--points", table_points, "grid size")->check(CLI::Range(2, 100000));
    table_cmd->add_option("--eps-min", table_lo, "grid lower end");
    table_cmd->add_option("--eps-max", table_hi, "grid upper end");

    // oracle -----------------------------------------------------------------
    auto *oracle_cmd =
        app.add_subcommand("oracle", "verify the closed forms by protocol simulation");
    std::string oracle_model, oracle_task = "ent", oracle_dir = "fwd";
    Index oracle_m = 2;
    int oracle_samples = 200, oracle_threads = 0;
    std::uint64_t oracle_seed = 0;
    oracle_cmd->add_option("--model", oracle_model, "harmonic model JSON")->required();
    oracle_cmd->add_option("--m", oracle_m, "code dimension")->required();
    oracle_cmd->add_option("--task", oracle_task, "ent or sub");
    oracle_cmd->add_option("--dir,--direction", oracle_dir, "fwd or bwd");
    oracle_cmd->add_option("--samples", oracle_samples, "number of random protocols");
    oracle_cmd->add_option("--seed", oracle_seed, "base seed (required)")->required();
    oracle_cmd->add_option("--threads", oracle_threads,
                           "worker cap (0 = auto, also capped by CAUSAMETRICS_THREADS)");

    // reconstruct ------------------------------------------------------------
    auto *rec_cmd = app.add_subcommand("reconstruct", "recover |alpha| and the dimension");
    std::string rec_model, rec_fwd, rec_bwd;
    double rec_tol = 1e-4;
    rec_cmd->add_option("--model", rec_model, "harmonic model JSON (profiles computed here)");
    rec_cmd->add_option("--fwd", rec_fwd, "forward profile CSV (epsilon,q)");
    rec_cmd->add_option("--bwd", rec_bwd, "backward profile CSV (epsilon,q)");
    rec_cmd->add_option("--tol-eps", rec_tol, "threshold tolerance");

    // measure ----------------------------------------------------------------
    auto *measure_cmd = app.add_subcommand("measure", "evaluate a causality measure");
    std::string measure_kind = "signalling", measure_dir = "fwd", measure_task = "ent";
    std::string measure_model, measure_in;
    double measure_eps = 0.3;
    bool measure_normalized = false;
    int measure_samples = 100;
    std::uint64_t measure_seed = 0;
    bool measure_seed_set = false;
    measure_cmd->add_option("--measure", measure_kind,
                            "zero | signalling | q_signalling | capacity");
    measure_cmd->add_option("--dir,--direction", measure_dir, "fwd or bwd");
    measure_cmd->add_option("--task", measure_task, "capacity task (ent or sub)");
    measure_cmd->add_option("--eps,--epsilon", measure_eps, "capacity error tolerance");
    measure_cmd->add_flag("--normalized", measure_normalized, "normalized variant");
    measure_cmd->add_option("--model", measure_model, "harmonic model JSON");
    measure_cmd->add_option("--in", measure_in, "process matrix JSON (signalling kinds)");
    measure_cmd->add_option("--samples", measure_samples,
                            "samples for the q_signalling fallback on raw matrices");
    measure_cmd->add_option("--seed", measure_seed, "seed for the sampled fallback")
        ->each([&](const std::string &) { measure_seed_set = true; });

    // axioms -----------------------------------------------------------------
    auto *axioms_cmd = app.add_subcommand("axioms", "run the axiom property suite");
    std::string ax_kind = "signalling", ax_dir = "fwd", ax_task = "ent";
    int ax_models = 20, ax_ops = 50;
    Index ax_dim = 2;
    double ax_eps = 0.3;
    bool ax_normalized = false;
    std::uint64_t ax_seed = 0;
    axioms_cmd->add_option("--measure", ax_kind, "measure kind");
    axioms_cmd->add_option("--dir,--direction", ax_dir, "fwd or bwd");
    axioms_cmd->add_option("--task", ax_task, "capacity task");
    axioms_cmd->add_option("--eps,--epsilon", ax_eps, "capacity error tolerance");
    axioms_cmd->add_flag("--normalized", ax_normalized, "normalized variant");
    axioms_cmd->add_option("--models", ax_models, "family size")->check(CLI::Range(1, 10000));
    axioms_cmd->add_option("--ops", ax_ops, "sampled local operations")
        ->check(CLI::Range(1, 10000));
    axioms_cmd->add_option("--dim", ax_dim, "subsystem dimension");
    axioms_cmd->add_option("--seed", ax_seed, "base seed (required)")->required();

    for (auto *sub : app.get_subcommands([](const CLI::App *) { return true; })) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    if (validate_cmd->parsed()) {
        ProcessMatrix w = parse_process_matrix(read_json_file(validate_in));
        ValidityReport report = validate(w, validate_tol);
        emit(validity_report_to_json(report), out_path);
        return report.all_ok() ? kExitOk : kExitDomain;
    }

    if (prob_cmd->parsed()) {
        ProcessMatrix w = parse_process_matrix(read_json_file(prob_in));
        InstrumentElement ma{parse_matrix(read_json_file(prob_ma)), Party::A};
        InstrumentElement mb{parse_matrix(read_json_file(prob_mb)), Party::B};
        double p = joint_probability(w, ma, mb);
        emit("{\"probability\": " + fmt_double(p) + "}", out_path);
        return kExitOk;
    }

    if (signal_cmd->parsed()) {
        ProcessMatrix w = parse_process_matrix(read_json_file(signal_in));
        SignalTestResult r = can_signal(w, parse_direction(signal_dir), signal_tol);
        emit(signal_result_to_json(r), out_path);
        return kExitOk;
    }

    if (build_cmd->parsed()) {
        HarmonicModel model = parse_harmonic_model(read_json_file(build_model));
        ProcessMatrix w =
            build_branch == 0 ? reduce(model) : branch(model, build_branch).matrix;
        emit(process_matrix_to_json(w), out_path);
        return kExitOk;
    }

    if (cap_cmd->parsed()) {
        CapacityQuery query;
        query.task = parse_task(cap_task);
        query.direction = parse_direction(cap_dir);
        query.epsilon = cap_eps;
        if (!cap_model.empty()) {
            HarmonicModel model = parse_harmonic_model(read_json_file(cap_model));
            query = CapacityQuery::from_model(model, query.task, query.direction, cap_eps);
        } else {
            if (cap_p1 < 0.0 || cap_dim < 1) {
                throw CLI::ValidationError("capacity", "need --model or --p1 with --dim");
            }
            query.p1 = cap_p1;
            query.p2 = cap_p2;
            query.dim = cap_dim;
            query.rho_b1_maximally_mixed = cap_assume_mixed;
            query.rho_a1_maximally_mixed = cap_assume_mixed;
        }
        double value = query.task == Task::Ent ? q_ent(query) : q_sub(query);
        if (cap_normalized) {
            value = normalize_capacity(value, query.dim, query.task);
        }
        emit(fmt_double(value), out_path);
        return kExitOk;
    }

    if (table_cmd->parsed()) {
        HarmonicModel model = parse_harmonic_model(read_json_file(table_model));
        auto grid = default_epsilon_grid(table_points, table_lo, table_hi);
        std::ostringstream csv;
        write_capacity_table(csv, model, grid);
        if (out_path.empty()) {
            std::cout << csv.str();
        } else {
            std::ofstream f(out_path);
            if (!f) {
                throw std::invalid_argument("cannot write to " + out_path);
            }
            f << csv.str();
        }
        return kExitOk;
    }

    if (oracle_cmd->parsed()) {
        HarmonicModel model = parse_harmonic_model(read_json_file(oracle_model));
        if (parse_direction(oracle_dir) == Direction::BtoA) {
            // Transmission from B to A is the forward task on the swapped
            // model: exchange the first two amplitudes and the x/y factors.
            std::array<Complex, 3> swapped{model.alpha[1], model.alpha[0], model.alpha[2]};
            std::vector<Index> dims{model.dim, model.dim, model.e3_dim};
            std::vector<std::size_t> perm{1, 0, 2};
            ComplexVector psi = permute_vector(model.psi, dims, perm);
            model = make_harmonic_model(swapped, model.dim, std::move(psi), model.e3_dim);
        }
        OracleReport report =
            parse_task(oracle_task) == Task::Ent
                ? run_ent_oracle(model, oracle_m, oracle_samples, oracle_seed, oracle_threads)
                : run_sub_oracle(model, oracle_m, oracle_samples, oracle_seed, oracle_threads);
        emit(oracle_report_to_json(report), out_path);
        return kExitOk;
    }

    if (rec_cmd->parsed()) {
        ReconstructionResult result;
        if (!rec_model.empty()) {
            HarmonicModel model = parse_harmonic_model(read_json_file(rec_model));
            result = recover(model, rec_tol);
        } else if (!rec_fwd.empty() && !rec_bwd.empty()) {
            std::ifstream f(rec_fwd), b(rec_bwd);
            if (!f || !b) {
                throw std::invalid_argument("cannot open profile CSV");
            }
            auto fwd = CapacityProfile::from_samples(Direction::AtoB, parse_profile_csv(f));
            auto bwd = CapacityProfile::from_samples(Direction::BtoA, parse_profile_csv(b));
            result = recover(fwd, bwd, rec_tol);
        } else {
            throw CLI::ValidationError("reconstruct", "need --model or both --fwd and --bwd");
        }
        emit(reconstruction_to_json(result), out_path);
        return kExitOk;
    }

    if (measure_cmd->parsed()) {
        MeasureDescriptor m;
        m.kind = parse_measure_kind(measure_kind);
        m.direction = parse_direction(measure_dir);
        m.task = parse_task(measure_task);
        m.epsilon = measure_eps;
        m.normalized = measure_normalized;
        if (!measure_model.empty()) {
            HarmonicModel model = parse_harmonic_model(read_json_file(measure_model));
            if (m.kind == MeasureKind::QSignalling) {
                QuantumSignalResult r = quantum_signal(model, m.direction);
                std::ostringstream out;
                out << "{\"measure\": \"" << m.name() << "\", \"value\": "
                    << fmt_double(r.signals ? 1.0 : 0.0)
                    << ", \"witness\": " << quantum_signal_to_json(r) << "}";
                emit(out.str(), out_path);
            } else {
                double value = evaluate(m, model);
                emit("{\"measure\": \"" + m.name() + "\", \"value\": " + fmt_double(value) + "}",
                     out_path);
            }
            return kExitOk;
        }
        if (!measure_in.empty()) {
            ProcessMatrix w = parse_process_matrix(read_json_file(measure_in));
            if (m.kind == MeasureKind::QSignalling) {
                if (!measure_seed_set) {
                    throw CLI::ValidationError(
                        "measure", "--seed is required for the sampled q_signalling fallback");
                }
                ProcessMatrix oriented =
                    m.direction == Direction::AtoB ? w : swap_parties(w);
                SampledQuantumSignal s =
                    quantum_signal_oracle(oriented, measure_samples, measure_seed);
                std::ostringstream out;
                out << "{\"measure\": \"" << m.name()
                    << "\", \"result\": " << sampled_quantum_signal_to_json(s) << "}";
                emit(out.str(), out_path);
                return kExitOk;
            }
            double value = evaluate_on_process(m, w);
            emit("{\"measure\": \"" + m.name() + "\", \"value\": " + fmt_double(value) + "}",
                 out_path);
            return kExitOk;
        }
        throw CLI::ValidationError("measure", "need --model or --in");
    }

    if (axioms_cmd->parsed()) {
        MeasureDescriptor m;
        m.kind = parse_measure_kind(ax_kind);
        m.direction = parse_direction(ax_dir);
        m.task = parse_task(ax_task);
        m.epsilon = ax_eps;
        m.normalized = ax_normalized;
        auto family = sample_measure_family(ax_models, ax_dim, ax_seed);
        auto ops = sample_channels(ax_ops, ax_dim, ax_seed);
        AxiomReport report = axiom_suite(m, family, ops, ax_seed);
        emit(axiom_report_to_json(report), out_path);
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ParseError &) {
        std::cerr << "usage error: run with --help for details\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
}
