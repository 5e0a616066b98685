#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rrm/milp.hpp"
#include "rrm/simplex.hpp"

namespace rrm::solver {

struct SolveOptions {
    double time_limit_s = 120.0;
    double abs_gap = 1e-6;
    double rel_gap = 1e-9;
    long node_limit = -1;  // < 0 = unbounded
    int threads = 1;
    enum class BranchRule { MostFractional, PseudoCost };
    enum class NodeOrder { BestBound, DepthFirst };
    BranchRule branch_rule = BranchRule::PseudoCost;
    NodeOrder node_order = NodeOrder::BestBound;
};

/// Optional primal heuristic: given the node LP point, may return a full
/// feasible assignment and its objective. Used to seed/improve the incumbent.
using HeuristicFn = std::function<std::optional<std::pair<double, std::vector<double>>>(
    const std::vector<double>&)>;

/// Branch-and-bound to proven optimality within the gap tolerances.
/// The objective and the canonical incumbent (lexicographically smallest
/// binary vector among discovered equal-objective optima) are deterministic
/// for fixed (model, options) regardless of the thread setting.
milp::Solution solve(const milp::MilpModel& model, const SolveOptions& opts = {},
                     const HeuristicFn& heuristic = nullptr);

// ---- external solver adapter ----

struct ExternalSolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SpawnError : ExternalSolverError {
    using ExternalSolverError::ExternalSolverError;
};
struct ExternalExitError : ExternalSolverError {
    using ExternalSolverError::ExternalSolverError;
};
struct SolutionParseError : ExternalSolverError {
    using ExternalSolverError::ExternalSolverError;
};

struct ExternalSolverConfig {
    /// Shell command with {mps} and {sol} placeholders.
    std::string command;
    /// Solution file dialect: pairs = `<name> <value>` lines; objective_pairs =
    /// a leading `objective <real>` line then pairs. auto-detects by default.
    enum class Dialect { Auto, Pairs, ObjectivePairs };
    Dialect dialect = Dialect::Auto;
};

milp::Solution solve_external(const milp::MilpModel& model, const ExternalSolverConfig& config,
                              const SolveOptions& opts = {});

/// Parse a solution file body in either dialect against the model's variable names.
/// Exposed for testing; solve_external uses it.
milp::Solution parse_solution_text(const milp::MilpModel& model, const std::string& text,
                                   ExternalSolverConfig::Dialect dialect);

/// Thread count from RL_THREADS if set and positive, else `fallback`.
int threads_from_env(int fallback);

}  // namespace rrm::solver
