#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rrm/builders.hpp"
#include "rrm/harness.hpp"
#include "rrm/instance.hpp"
#include "rrm/milp.hpp"
#include "rrm/oracle.hpp"
#include "rrm/solver.hpp"
#include "rrm/stochastic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitUsage = 64;

struct CliError {
    int code;
    std::string message;
};

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// ---- shared option bundles ----

struct InstanceArgs {
    std::string instance_path;
    int customers = 2;
    std::uint64_t seed = 0;
    std::optional<long> cap2, cap3;
    std::optional<int> scenarios;
    std::vector<int> levels;
    std::string fixture;  // "", "dominance"

    void attach(CLI::App* app) {
        app->add_option("--instance", instance_path, "instance JSON file (overrides synth flags)");
        app->add_option("--customers", customers, "synthetic instance size")->check(CLI::PositiveNumber);
        app->add_option("--seed", seed, "random seed");
        app->add_option("--cap2", cap2, "capacity of alternative 2");
        app->add_option("--cap3", cap3, "capacity of alternative 3");
        app->add_option("--scenarios", scenarios, "scenario count override")->check(CLI::PositiveNumber);
        app->add_option("--levels", levels, "price level indices override");
        app->add_option("--fixture", fixture, "draw fixture: dominance")
            ->check(CLI::IsMember({"", "dominance"}));
    }

    rrm::instance::Instance make() const {
        rrm::instance::Instance inst;
        if (!instance_path.empty()) {
            std::ifstream in(instance_path, std::ios::binary);
            if (!in) throw CliError{kExitValidation, "cannot read " + instance_path};
            std::stringstream ss;
            ss << in.rdbuf();
            inst = rrm::instance::load(ss.str());
        } else {
            if (cap2.has_value() != cap3.has_value())
                throw CliError{kExitValidation, "--cap2 and --cap3 must be given together"};
            std::optional<std::pair<long, long>> caps;
            if (cap2) caps = {*cap2, *cap3};
            inst = rrm::instance::synth_instance(customers, caps, seed);
        }
        if (scenarios) inst.scenario_count = *scenarios;
        if (!levels.empty()) inst.price.levels = levels;
        auto violations = rrm::instance::validate(inst);
        if (!violations.empty())
            throw CliError{kExitValidation, "invalid instance: " + violations.front().code + ": " +
                                                violations.front().message};
        return inst;
    }

    rrm::stochastic::ScenarioDraws draws(const rrm::instance::Instance& inst) const {
        return fixture == "dominance" ? rrm::stochastic::dominance_draws(inst)
                                      : rrm::stochastic::sample_draws(inst);
    }
};

struct SolverArgs {
    double time_limit = 120.0;
    long node_limit = -1;
    int threads = 1;
    std::string solver = "embedded";
    std::string external_cmd;

    void attach(CLI::App* app) {
        app->add_option("--time-limit", time_limit, "wall-clock limit in seconds")
            ->check(CLI::PositiveNumber);
        app->add_option("--node-limit", node_limit, "branch-and-bound node limit");
        app->add_option("--threads", threads, "solver threads (RL_THREADS overrides)")
            ->check(CLI::PositiveNumber);
        app->add_option("--solver", solver, "embedded | external")
            ->check(CLI::IsMember({"embedded", "external"}));
        app->add_option("--external-cmd", external_cmd,
                        "external solver command with {mps} and {sol} placeholders");
    }

    rrm::solver::SolveOptions options() const {
        rrm::solver::SolveOptions opts;
        opts.time_limit_s = time_limit;
        opts.node_limit = node_limit;
        opts.threads = rrm::solver::threads_from_env(threads);
        return opts;
    }

    std::optional<rrm::solver::ExternalSolverConfig> external() const {
        if (solver != "external") return std::nullopt;
        if (external_cmd.empty())
            throw CliError{kExitValidation, "--solver external requires --external-cmd"};
        rrm::solver::ExternalSolverConfig cfg;
        cfg.command = external_cmd;
        return cfg;
    }
};

rrm::milp::MilpModel build_model(const std::string& model, const rrm::instance::Instance& inst,
                                 const rrm::stochastic::ScenarioDraws& draws) {
    auto er = rrm::stochastic::compute_er(inst, draws);
    auto bounds = rrm::stochastic::derive_bounds(inst, draws, er);
    if (model == "rrm-uncap") return rrm::builders::build_rrm_uncap(inst, draws, er, bounds);
    if (model == "rrm-cap") return rrm::builders::build_rrm_cap(inst, draws, er, bounds);
    if (model == "rum") return rrm::builders::build_rum(inst, draws);
    throw CliError{kExitValidation, "unknown model " + model};
}

rrm::milp::Solution solve_built(const rrm::milp::MilpModel& m, const rrm::instance::Instance& inst,
                                const rrm::stochastic::ScenarioDraws& draws,
                                const SolverArgs& sargs) {
    auto opts = sargs.options();
    try {
        if (auto ext = sargs.external()) return rrm::solver::solve_external(m, *ext, opts);
        auto er = rrm::stochastic::compute_er(inst, draws);
        auto h = rrm::builders::make_heuristic(m, inst, draws, er);
        return rrm::solver::solve(m, opts, h);
    } catch (const rrm::solver::ExternalSolverError& e) {
        throw CliError{kExitSolver, std::string("external solver: ") + e.what()};
    }
}

void require_optimal(const rrm::milp::Solution& sol) {
    using rrm::milp::SolveStatus;
    switch (sol.status) {
        case SolveStatus::Optimal: return;
        case SolveStatus::Infeasible: throw CliError{kExitSolver, "solver: infeasible"};
        case SolveStatus::Unbounded: throw CliError{kExitSolver, "solver: unbounded"};
        default: throw CliError{kExitSolver, "solver: time limit reached"};
    }
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{kExitValidation, "cannot write " + path};
    out << text;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Choice-based revenue optimization toolkit"};
    app.require_subcommand(1);

    // ---- generate ----
    auto* gen = app.add_subcommand("generate", "emit a synthetic instance as JSON");
    InstanceArgs gen_inst;
    gen_inst.attach(gen);
    std::string gen_out;
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // ---- build ----
    auto* build = app.add_subcommand("build", "build a model and emit MPS");
    InstanceArgs build_inst;
    build_inst.attach(build);
    std::string build_model_name = "rrm-uncap", build_out;
    build->add_option("--model", build_model_name, "rrm-uncap | rrm-cap | rum")
        ->check(CLI::IsMember({"rrm-uncap", "rrm-cap", "rum"}));
    build->add_option("--out", build_out, "output MPS path (default stdout)");

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "build and solve a model");
    InstanceArgs solve_inst;
    solve_inst.attach(solve);
    SolverArgs solve_solver;
    solve_solver.attach(solve);
    std::string solve_model_name = "rrm-uncap";
    solve->add_option("--model", solve_model_name, "rrm-uncap | rrm-cap | rum")
        ->check(CLI::IsMember({"rrm-uncap", "rrm-cap", "rum"}));

    // ---- solve-mps ----
    auto* smps = app.add_subcommand("solve-mps", "solve a model file with the embedded solver");
    std::string smps_in, smps_sol;
    double smps_time = 120.0;
    smps->add_option("--mps", smps_in, "input MPS file")->required();
    smps->add_option("--sol", smps_sol, "solution output (objective + name/value pairs)");
    smps->add_option("--time-limit", smps_time, "wall-clock limit in seconds")
        ->check(CLI::PositiveNumber);

    // ---- oracle ----
    auto* orc = app.add_subcommand("oracle", "brute-force optimum by plan enumeration");
    InstanceArgs orc_inst;
    orc_inst.attach(orc);
    std::string orc_mode = "uncap", orc_behavior = "rrm";
    orc->add_option("--mode", orc_mode, "uncap | cap")->check(CLI::IsMember({"uncap", "cap"}));
    orc->add_option("--behavior", orc_behavior, "rrm | rum")->check(CLI::IsMember({"rrm", "rum"}));

    // ---- compare ----
    auto* cmp = app.add_subcommand("compare", "solve the MILP and the oracle on the same inputs");
    InstanceArgs cmp_inst;
    cmp_inst.attach(cmp);
    SolverArgs cmp_solver;
    cmp_solver.attach(cmp);
    std::string cmp_model_name = "rrm-uncap";
    double cmp_tol = 1e-6;
    cmp->add_option("--model", cmp_model_name, "rrm-uncap | rrm-cap | rum")
        ->check(CLI::IsMember({"rrm-uncap", "rrm-cap", "rum"}));
    cmp->add_option("--tolerance", cmp_tol, "objective agreement tolerance");

    // ---- report ----
    auto* rep = app.add_subcommand("report", "run an experiment grid and write CSV/JSON");
    SolverArgs rep_solver;
    rep_solver.attach(rep);
    std::string rep_counts = "10", rep_models = "rrm-uncap", rep_caps, rep_fixture;
    std::string rep_csv, rep_json;
    std::vector<std::uint64_t> rep_seeds{0};
    std::optional<int> rep_scenarios;
    std::vector<int> rep_levels;
    bool rep_det = false;
    rep->add_option("--counts", rep_counts, "comma-separated customer counts");
    rep->add_option("--models", rep_models, "comma-separated: rrm-uncap,rrm-cap,rum");
    rep->add_option("--caps", rep_caps, "per-count capacities, e.g. 11=5:5,12=6:6");
    rep->add_option("--seeds", rep_seeds, "seeds (one run per seed)");
    rep->add_option("--fixture", rep_fixture, "draw fixture: dominance")
        ->check(CLI::IsMember({"", "dominance"}));
    rep->add_option("--scenarios", rep_scenarios, "scenario count override")
        ->check(CLI::PositiveNumber);
    rep->add_option("--levels", rep_levels, "price level indices override");
    rep->add_flag("--deterministic-timing", rep_det, "report seconds as 0 for byte-stable files");
    rep->add_option("--csv", rep_csv, "CSV output path");
    rep->add_option("--json", rep_json, "JSON output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) {
            auto inst = gen_inst.make();
            write_or_print(gen_out, rrm::instance::save(inst));
            return kExitOk;
        }

        if (*build) {
            auto inst = build_inst.make();
            auto draws = build_inst.draws(inst);
            auto m = build_model(build_model_name, inst, draws);
            write_or_print(build_out, rrm::milp::export_mps(m));
            return kExitOk;
        }

        if (*solve) {
            auto inst = solve_inst.make();
            auto draws = solve_inst.draws(inst);
            auto m = build_model(solve_model_name, inst, draws);
            auto sol = solve_built(m, inst, draws, solve_solver);
            require_optimal(sol);
            std::cout << "objective " << fmt_real(sol.objective) << "\n"
                      << "nodes " << sol.stats.nodes << "\n"
                      << "iterations " << sol.stats.iterations << "\n";
            return kExitOk;
        }

        if (*smps) {
            std::ifstream in(smps_in, std::ios::binary);
            if (!in) throw CliError{kExitValidation, "cannot read " + smps_in};
            std::stringstream ss;
            ss << in.rdbuf();
            auto m = rrm::milp::import_mps(ss.str());
            rrm::solver::SolveOptions opts;
            opts.time_limit_s = smps_time;
            auto sol = rrm::solver::solve(m, opts);
            require_optimal(sol);
            std::string text = "objective " + fmt_real(sol.objective) + "\n";
            for (const auto& v : m.variables)
                text += v.tag.name() + " " + fmt_real(sol.values[v.id]) + "\n";
            write_or_print(smps_sol, text);
            if (!smps_sol.empty()) std::cout << "objective " << fmt_real(sol.objective) << "\n";
            return kExitOk;
        }

        if (*orc) {
            auto inst = orc_inst.make();
            auto draws = orc_inst.draws(inst);
            auto er = rrm::stochastic::compute_er(inst, draws);
            auto mode = orc_mode == "cap" ? rrm::oracle::Mode::Cap : rrm::oracle::Mode::Uncap;
            auto behavior =
                orc_behavior == "rum" ? rrm::oracle::Behavior::Rum : rrm::oracle::Behavior::Rrm;
            auto res = rrm::oracle::oracle_optimize(inst, draws, er, mode, behavior);
            std::cout << "objective " << fmt_real(res.avg_revenue) << "\n";
            return kExitOk;
        }

        if (*cmp) {
            auto inst = cmp_inst.make();
            auto draws = cmp_inst.draws(inst);
            auto m = build_model(cmp_model_name, inst, draws);
            auto sol = solve_built(m, inst, draws, cmp_solver);
            require_optimal(sol);
            auto er = rrm::stochastic::compute_er(inst, draws);
            auto mode = cmp_model_name == "rrm-cap" ? rrm::oracle::Mode::Cap
                                                    : rrm::oracle::Mode::Uncap;
            auto behavior = cmp_model_name == "rum" ? rrm::oracle::Behavior::Rum
                                                    : rrm::oracle::Behavior::Rrm;
            auto res = rrm::oracle::oracle_optimize(inst, draws, er, mode, behavior);
            double diff = std::fabs(sol.objective - res.avg_revenue);
            std::cout << "milp " << fmt_real(sol.objective) << "\n"
                      << "oracle " << fmt_real(res.avg_revenue) << "\n"
                      << "difference " << fmt_real(diff) << "\n";
            if (diff > cmp_tol) throw CliError{kExitSolver, "objectives disagree beyond tolerance"};
            return kExitOk;
        }

        if (*rep) {
            rrm::harness::ExperimentConfig cfg;
            for (const auto& c : split_csv(rep_counts)) cfg.customer_counts.push_back(std::stoi(c));
            for (const auto& name : split_csv(rep_models)) {
                auto m = rrm::harness::model_from_name(name);
                if (!m) throw CliError{kExitValidation, "unknown model " + name};
                cfg.models.push_back(*m);
            }
            for (const auto& spec : split_csv(rep_caps)) {
                auto eq = spec.find('=');
                auto colon = spec.find(':', eq);
                if (eq == std::string::npos || colon == std::string::npos)
                    throw CliError{kExitValidation, "bad --caps entry " + spec +
                                                        " (expected count=c2:c3)"};
                cfg.capacities[std::stoi(spec.substr(0, eq))] = {
                    std::stol(spec.substr(eq + 1, colon - eq - 1)),
                    std::stol(spec.substr(colon + 1))};
            }
            cfg.seeds = rep_seeds;
            cfg.dominance_fixture = rep_fixture == "dominance";
            cfg.scenario_count = rep_scenarios;
            if (!rep_levels.empty()) cfg.levels = rep_levels;
            cfg.solve = rep_solver.options();
            cfg.external = rep_solver.external();
            cfg.deterministic_timing = rep_det;
            cfg.csv_path = rep_csv;
            cfg.json_path = rep_json;
            auto rows = rrm::harness::run_experiment(cfg);
            if (rep_csv.empty() && rep_json.empty()) std::cout << rrm::harness::to_csv(rows);
            bool any_failed = false;
            for (const auto& r : rows) any_failed |= !r.solved;
            if (any_failed) throw CliError{kExitSolver, "one or more cells failed to solve"};
            return kExitOk;
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const rrm::instance::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const rrm::harness::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitUsage;
}
