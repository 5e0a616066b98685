#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>

#include "rrm/builders.hpp"
#include "rrm/harness.hpp"
#include "rrm/instance.hpp"
#include "rrm/milp.hpp"
#include "rrm/oracle.hpp"
#include "rrm/solver.hpp"
#include "rrm/stochastic.hpp"

namespace py = pybind11;

namespace {

using rrm::instance::Instance;

struct Prepared {
    Instance inst;
    rrm::stochastic::ScenarioDraws draws;
    rrm::stochastic::ERTable er;
    rrm::stochastic::DerivedBounds bounds;
};

Prepared prepare(const std::string& instance_json, bool dominance) {
    Prepared p;
    p.inst = rrm::instance::load(instance_json);
    auto violations = rrm::instance::validate(p.inst);
    if (!violations.empty())
        throw std::invalid_argument("invalid instance: " + violations.front().code + ": " +
                                    violations.front().message);
    p.draws = dominance ? rrm::stochastic::dominance_draws(p.inst)
                        : rrm::stochastic::sample_draws(p.inst);
    p.er = rrm::stochastic::compute_er(p.inst, p.draws);
    p.bounds = rrm::stochastic::derive_bounds(p.inst, p.draws, p.er);
    return p;
}

rrm::milp::MilpModel build(const Prepared& p, const std::string& model) {
    if (model == "rrm-uncap")
        return rrm::builders::build_rrm_uncap(p.inst, p.draws, p.er, p.bounds);
    if (model == "rrm-cap") return rrm::builders::build_rrm_cap(p.inst, p.draws, p.er, p.bounds);
    if (model == "rum") return rrm::builders::build_rum(p.inst, p.draws);
    throw std::invalid_argument("unknown model " + model);
}

const char* status_name(rrm::milp::SolveStatus s) {
    switch (s) {
        case rrm::milp::SolveStatus::Optimal: return "optimal";
        case rrm::milp::SolveStatus::Infeasible: return "infeasible";
        case rrm::milp::SolveStatus::Unbounded: return "unbounded";
        default: return "time_limit";
    }
}

py::dict outcome_dict(const rrm::builders::PricingOutcome& out) {
    py::dict prices, offered, chosen, revenue;
    for (const auto& [key, v] : out.price) prices[py::make_tuple(key.first, key.second)] = v;
    for (const auto& [key, v] : out.offered) offered[py::make_tuple(key.first, key.second)] = v;
    for (const auto& [key, v] : out.chosen) {
        auto k = py::make_tuple(key.first, key.second);
        if (v)
            chosen[k] = *v;
        else
            chosen[k] = py::none();
    }
    for (const auto& [r, v] : out.revenue_per_scenario) revenue[py::int_(r)] = v;
    py::dict d;
    d["prices"] = std::move(prices);
    d["offered"] = std::move(offered);
    d["chosen"] = std::move(chosen);
    d["revenue_per_scenario"] = std::move(revenue);
    d["avg_revenue"] = out.avg_revenue;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Choice-based revenue optimization toolkit";

    m.def(
        "synth_instance",
        [](int customers, std::optional<std::pair<long, long>> capacities, std::uint64_t seed) {
            return rrm::instance::save(rrm::instance::synth_instance(customers, capacities, seed));
        },
        py::arg("customers"), py::arg("capacities") = std::nullopt, py::arg("seed") = 0,
        "Synthetic instance in canonical JSON form.");

    m.def(
        "validate",
        [](const std::string& instance_json) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& v : rrm::instance::validate(rrm::instance::load(instance_json)))
                out.emplace_back(v.code, v.message);
            return out;
        },
        py::arg("instance_json"), "List of (code, message) violations; empty when valid.");

    m.def(
        "instance_digest",
        [](const std::string& instance_json) {
            return rrm::instance::digest(rrm::instance::load(instance_json));
        },
        py::arg("instance_json"));

    m.def(
        "build_mps",
        [](const std::string& instance_json, const std::string& model, bool dominance) {
            return rrm::milp::export_mps(build(prepare(instance_json, dominance), model));
        },
        py::arg("instance_json"), py::arg("model") = "rrm-uncap", py::arg("dominance") = false,
        "Free-format MPS text of the built model.");

    m.def(
        "model_counts",
        [](const std::string& instance_json, const std::string& model, bool dominance) {
            auto c = rrm::milp::model_counts(build(prepare(instance_json, dominance), model));
            py::dict d;
            d["variables"] = c.n_vars;
            d["constraints"] = c.n_constraints;
            d["binaries"] = c.n_binaries;
            return d;
        },
        py::arg("instance_json"), py::arg("model") = "rrm-uncap", py::arg("dominance") = false);

    m.def(
        "solve",
        [](const std::string& instance_json, const std::string& model, bool dominance,
           double time_limit_s, long node_limit) {
            auto p = prepare(instance_json, dominance);
            auto mdl = build(p, model);
            rrm::solver::SolveOptions opts;
            opts.time_limit_s = time_limit_s;
            opts.node_limit = node_limit;
            opts.threads = rrm::solver::threads_from_env(opts.threads);
            auto h = rrm::builders::make_heuristic(mdl, p.inst, p.draws, p.er);
            auto sol = rrm::solver::solve(mdl, opts, h);
            py::dict d;
            d["status"] = status_name(sol.status);
            d["nodes"] = sol.stats.nodes;
            d["iterations"] = sol.stats.iterations;
            if (sol.status == rrm::milp::SolveStatus::Optimal) {
                d["objective"] = sol.objective;
                d["outcome"] = outcome_dict(rrm::builders::decode(mdl, sol, p.inst));
            } else {
                d["objective"] = py::none();
            }
            return d;
        },
        py::arg("instance_json"), py::arg("model") = "rrm-uncap", py::arg("dominance") = false,
        py::arg("time_limit_s") = 120.0, py::arg("node_limit") = -1,
        "Solve with the embedded branch-and-bound; returns status, stats, and outcome.");

    m.def(
        "oracle",
        [](const std::string& instance_json, const std::string& mode, const std::string& behavior,
           bool dominance) {
            auto p = prepare(instance_json, dominance);
            auto md = mode == "cap" ? rrm::oracle::Mode::Cap : rrm::oracle::Mode::Uncap;
            auto bh =
                behavior == "rum" ? rrm::oracle::Behavior::Rum : rrm::oracle::Behavior::Rrm;
            return rrm::oracle::oracle_optimize(p.inst, p.draws, p.er, md, bh).avg_revenue;
        },
        py::arg("instance_json"), py::arg("mode") = "uncap", py::arg("behavior") = "rrm",
        py::arg("dominance") = false, "Brute-force optimal average revenue.");

    m.def("gap_percent", &rrm::harness::gap_percent, py::arg("rum_objective"),
          py::arg("rrm_objective"));

    m.def(
        "mps_roundtrip",
        [](const std::string& mps_text) {
            return rrm::milp::export_mps(rrm::milp::import_mps(mps_text));
        },
        py::arg("mps_text"), "Import-then-export; byte-identical for canonical exports.");
}
