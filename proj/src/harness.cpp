#include "rrm/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "rrm/milp.hpp"
#include "rrm/stochastic.hpp"

namespace rrm::harness {

using builders::PricingOutcome;
using nlohmann::json;

const char* model_name(Model m) {
    switch (m) {
        case Model::RrmUncap: return "rrm-uncap";
        case Model::RrmCap: return "rrm-cap";
        case Model::Rum: return "rum";
    }
    return "?";
}

std::optional<Model> model_from_name(const std::string& name) {
    if (name == "rrm-uncap") return Model::RrmUncap;
    if (name == "rrm-cap") return Model::RrmCap;
    if (name == "rum") return Model::Rum;
    return std::nullopt;
}

double gap_percent(double rum_objective, double rrm_objective) {
    if (!(rrm_objective > 0.0))
        throw std::domain_error("gap_percent: reference objective must be positive");
    return 100.0 * (rrm_objective - rum_objective) / rrm_objective;
}

namespace {

std::string fmt_real(double v, const char* spec = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

milp::ModelKind model_kind(Model m) {
    switch (m) {
        case Model::RrmUncap: return milp::ModelKind::RrmUncap;
        case Model::RrmCap: return milp::ModelKind::RrmCap;
        default: return milp::ModelKind::Rum;
    }
}

void validate_config(const ExperimentConfig& config) {
    if (config.customer_counts.empty() || config.models.empty() || config.seeds.empty())
        throw ConfigError("experiment config: counts, models, and seeds must be nonempty");
    for (int n : config.customer_counts)
        if (n < 1) throw ConfigError("experiment config: customer counts must be >= 1");
    if (config.scenario_count && *config.scenario_count < 1)
        throw ConfigError("experiment config: scenario count must be >= 1");
    if (config.levels && config.levels->empty())
        throw ConfigError("experiment config: level override must be nonempty");
}

json outcome_json(const PricingOutcome& out) {
    json prices = json::array();
    for (const auto& [key, p] : out.price)
        prices.push_back({{"alternative", key.first}, {"customer", key.second}, {"price", p}});
    json offered = json::array();
    for (const auto& [key, o] : out.offered)
        offered.push_back({{"alternative", key.first}, {"customer", key.second}, {"offered", o}});
    json chosen = json::array();
    for (const auto& [key, ch] : out.chosen) {
        json c = {{"customer", key.first}, {"scenario", key.second}};
        if (ch)
            c["alternative"] = *ch;
        else
            c["alternative"] = nullptr;
        chosen.push_back(std::move(c));
    }
    json rev = json::array();
    for (const auto& [r, v] : out.revenue_per_scenario)
        rev.push_back({{"scenario", r}, {"revenue", v}});
    return {{"prices", std::move(prices)},
            {"offered", std::move(offered)},
            {"chosen", std::move(chosen)},
            {"revenue_per_scenario", std::move(rev)},
            {"avg_revenue", out.avg_revenue}};
}

}  // namespace

std::vector<ReportRow> run_experiment(const ExperimentConfig& config) {
    validate_config(config);

    solver::SolveOptions opts = config.solve;
    opts.threads = solver::threads_from_env(opts.threads);

    std::vector<ReportRow> rows;
    for (int count : config.customer_counts) {
        std::optional<std::pair<long, long>> caps;
        if (auto it = config.capacities.find(count); it != config.capacities.end())
            caps = it->second;
        for (std::uint64_t seed : config.seeds) {
            auto inst = instance::synth_instance(count, caps, seed);
            if (config.scenario_count) inst.scenario_count = *config.scenario_count;
            if (config.levels) inst.price.levels = *config.levels;
            auto draws = config.dominance_fixture ? stochastic::dominance_draws(inst)
                                                  : stochastic::sample_draws(inst);
            auto er = stochastic::compute_er(inst, draws);
            auto bounds = stochastic::derive_bounds(inst, draws, er);
            const std::uint64_t inst_digest = instance::digest(inst);
            const std::uint64_t draw_digest = stochastic::digest(draws);

            std::size_t cell_start = rows.size();
            for (Model model : config.models) {
                ReportRow row;
                row.n_customers = count;
                if (caps) {
                    row.cap_alt2 = caps->first;
                    row.cap_alt3 = caps->second;
                }
                row.seed = seed;
                row.model = model;
                row.instance_digest = inst_digest;
                row.draw_digest = draw_digest;
                try {
                    milp::MilpModel m;
                    switch (model) {
                        case Model::RrmUncap:
                            m = builders::build_rrm_uncap(inst, draws, er, bounds);
                            break;
                        case Model::RrmCap:
                            m = builders::build_rrm_cap(inst, draws, er, bounds);
                            break;
                        case Model::Rum: m = builders::build_rum(inst, draws); break;
                    }
                    auto counts = milp::model_counts(m);
                    row.constraints = static_cast<long>(counts.n_constraints);
                    row.variables = static_cast<long>(counts.n_vars);

                    milp::Solution sol;
                    if (config.external) {
                        sol = solver::solve_external(m, *config.external, opts);
                    } else {
                        auto h = builders::make_heuristic(m, inst, draws, er);
                        sol = solver::solve(m, opts, h);
                    }
                    row.iterations = sol.stats.iterations;
                    row.nodes = sol.stats.nodes;
                    row.seconds = config.deterministic_timing ? 0.0 : sol.stats.wall_seconds;
                    if (sol.status != milp::SolveStatus::Optimal) {
                        switch (sol.status) {
                            case milp::SolveStatus::Infeasible: row.error = "infeasible"; break;
                            case milp::SolveStatus::Unbounded: row.error = "unbounded"; break;
                            default: row.error = "time limit"; break;
                        }
                    } else {
                        row.objective = sol.objective;
                        row.outcome = builders::decode(m, sol, inst);
                        row.solved = true;
                        auto violations = builders::audit_solution(model_kind(model), inst,
                                                                   draws, er, row.outcome);
                        for (const auto& v : violations) {
                            if (!row.error.empty()) row.error += "; ";
                            row.error += "audit:" + v.code;
                        }
                    }
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                rows.push_back(std::move(row));
            }

            // Table 3 comparison: the rum row carries the gap against the rrm
            // sibling solved on the same draws (uncapacitated preferred).
            const ReportRow* rrm = nullptr;
            for (std::size_t k = cell_start; k < rows.size(); ++k) {
                const ReportRow& r = rows[k];
                if (!r.solved) continue;
                if (r.model == Model::RrmUncap) rrm = &r;
                if (r.model == Model::RrmCap && !rrm) rrm = &r;
            }
            if (rrm && rrm->objective > 0.0) {
                for (std::size_t k = cell_start; k < rows.size(); ++k) {
                    if (rows[k].model == Model::Rum && rows[k].solved)
                        rows[k].gap_percent = gap_percent(rows[k].objective, rrm->objective);
                }
            }
        }
    }

    if (!config.csv_path.empty()) {
        std::ofstream out(config.csv_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + config.csv_path);
        out << to_csv(rows);
    }
    if (!config.json_path.empty()) {
        std::ofstream out(config.json_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + config.json_path);
        out << to_json(config, rows);
    }
    return rows;
}

std::string to_csv(const std::vector<ReportRow>& rows) {
    std::string out =
        "n_customers,cap_alt2,cap_alt3,model,objective,seconds,constraints,variables,"
        "iterations,nodes,gap_percent\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n_customers);
        out += ',';
        if (r.cap_alt2) out += std::to_string(*r.cap_alt2);
        out += ',';
        if (r.cap_alt3) out += std::to_string(*r.cap_alt3);
        out += ',';
        out += model_name(r.model);
        out += ',';
        if (r.solved) out += fmt_real(r.objective);
        out += ',';
        out += fmt_real(r.seconds, "%.3f");
        out += ',';
        out += std::to_string(r.constraints);
        out += ',';
        out += std::to_string(r.variables);
        out += ',';
        out += std::to_string(r.iterations);
        out += ',';
        out += std::to_string(r.nodes);
        out += ',';
        if (r.gap_percent) out += std::to_string(std::lround(*r.gap_percent));
        out += '\n';
    }
    return out;
}

std::string to_json(const ExperimentConfig& config, const std::vector<ReportRow>& rows) {
    json opts = {{"time_limit_s", config.solve.time_limit_s},
                 {"abs_gap", config.solve.abs_gap},
                 {"rel_gap", config.solve.rel_gap},
                 {"node_limit", config.solve.node_limit},
                 // the configured value, not the RL_THREADS override: reports
                 // must be byte-identical regardless of the thread count
                 {"threads", config.solve.threads},
                 {"deterministic_timing", config.deterministic_timing},
                 {"dominance_fixture", config.dominance_fixture},
                 {"solver", config.external ? "external" : "embedded"}};
    if (config.external) opts["external_command"] = config.external->command;
    if (config.scenario_count) opts["scenario_count"] = *config.scenario_count;
    if (config.levels) opts["levels"] = *config.levels;
    json models = json::array();
    for (Model m : config.models) models.push_back(model_name(m));
    opts["models"] = std::move(models);
    opts["customer_counts"] = config.customer_counts;
    opts["seeds"] = config.seeds;
    json caps = json::array();
    for (const auto& [count, c] : config.capacities)
        caps.push_back({{"n_customers", count}, {"cap_alt2", c.first}, {"cap_alt3", c.second}});
    opts["capacities"] = std::move(caps);

    json jrows = json::array();
    for (const auto& r : rows) {
        json row = {{"n_customers", r.n_customers},
                    {"model", model_name(r.model)},
                    {"seed", r.seed},
                    {"solved", r.solved},
                    {"seconds", r.seconds},
                    {"constraints", r.constraints},
                    {"variables", r.variables},
                    {"iterations", r.iterations},
                    {"nodes", r.nodes},
                    {"instance_digest", r.instance_digest},
                    {"draw_digest", r.draw_digest}};
        row["cap_alt2"] = r.cap_alt2 ? json(*r.cap_alt2) : json(nullptr);
        row["cap_alt3"] = r.cap_alt3 ? json(*r.cap_alt3) : json(nullptr);
        row["objective"] = r.solved ? json(r.objective) : json(nullptr);
        row["gap_percent"] = r.gap_percent ? json(*r.gap_percent) : json(nullptr);
        row["error"] = r.error;
        if (r.solved) row["outcome"] = outcome_json(r.outcome);
        jrows.push_back(std::move(row));
    }
    json doc = {{"options", std::move(opts)}, {"rows", std::move(jrows)}};
    return doc.dump(2) + "\n";
}

}  // namespace rrm::harness
