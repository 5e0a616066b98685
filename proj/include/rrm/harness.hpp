#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rrm/builders.hpp"
#include "rrm/instance.hpp"
#include "rrm/solver.hpp"

namespace rrm::harness {

enum class Model { RrmUncap, RrmCap, Rum };

/// "rrm-uncap", "rrm-cap", "rum" — the spelling used in CSV rows and CLI flags.
const char* model_name(Model m);
std::optional<Model> model_from_name(const std::string& name);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::vector<int> customer_counts;                 // nonempty
    std::map<int, std::pair<long, long>> capacities;  // count -> (c2, c3); absent = unbounded
    std::vector<Model> models;                        // nonempty
    std::vector<std::uint64_t> seeds;                 // nonempty
    bool dominance_fixture = false;
    std::optional<int> scenario_count;        // overrides the instance default
    std::optional<std::vector<int>> levels;   // overrides the price grid
    solver::SolveOptions solve;
    std::optional<solver::ExternalSolverConfig> external;  // nullopt = embedded
    /// Report seconds as 0 so identical runs produce byte-identical files.
    bool deterministic_timing = false;
    std::string csv_path;   // empty = not written
    std::string json_path;  // empty = not written
};

struct ReportRow {
    int n_customers = 0;
    std::optional<long> cap_alt2, cap_alt3;
    std::uint64_t seed = 0;
    Model model = Model::RrmUncap;
    bool solved = false;
    std::string error;  // empty when solved and audited clean
    double objective = 0.0;
    double seconds = 0.0;
    long constraints = 0;
    long variables = 0;
    long iterations = 0;
    long nodes = 0;
    /// Set on rum rows whose (count, seed) cell also solved an rrm model.
    std::optional<double> gap_percent;
    std::uint64_t instance_digest = 0;
    std::uint64_t draw_digest = 0;
    builders::PricingOutcome outcome;  // decoded when solved
};

/// 100 * (rrm - rum) / rrm. Throws std::domain_error when rrm <= 0.
double gap_percent(double rum_objective, double rrm_objective);

/// Builds and solves every (count, seed, model) cell on shared draws; failures
/// in one cell are recorded on the row and the run continues. Writes the CSV
/// and JSON reports when the config carries paths.
std::vector<ReportRow> run_experiment(const ExperimentConfig& config);

/// Fixed columns: n_customers, cap_alt2, cap_alt3, model, objective, seconds,
/// constraints, variables, iterations, nodes, gap_percent. The gap prints as
/// a rounded integer; JSON keeps full precision.
std::string to_csv(const std::vector<ReportRow>& rows);

/// Full bundle: options, per-row digests, decoded outcomes, errors.
std::string to_json(const ExperimentConfig& config, const std::vector<ReportRow>& rows);

}  // namespace rrm::harness
