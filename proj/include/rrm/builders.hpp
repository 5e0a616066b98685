#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rrm/instance.hpp"
#include "rrm/milp.hpp"
#include "rrm/solver.hpp"
#include "rrm/stochastic.hpp"

namespace rrm::builders {

/// Decoded supplier decision plus realized choices and revenue.
struct PricingOutcome {
    /// (alternative id > 0, customer id) -> posted price (bare lp when no level picked)
    std::map<std::pair<int, int>, double> price;
    /// (alternative id > 0, customer id) -> offered at all (capacitated y_in; true otherwise)
    std::map<std::pair<int, int>, bool> offered;
    /// (customer id, scenario) -> chosen alternative id, nullopt = no purchase variable set
    std::map<std::pair<int, int>, std::optional<int>> chosen;
    std::map<int, double> revenue_per_scenario;
    double avg_revenue = 0.0;
};

/// Inputs built from different instances (digest mismatch).
struct InputMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Recomputed objective of a decoded solution disagrees with the solver's.
struct DecodeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

milp::MilpModel build_rrm_uncap(const instance::Instance& inst,
                                const stochastic::ScenarioDraws& draws,
                                const stochastic::ERTable& er,
                                const stochastic::DerivedBounds& bounds);

milp::MilpModel build_rrm_cap(const instance::Instance& inst,
                              const stochastic::ScenarioDraws& draws,
                              const stochastic::ERTable& er,
                              const stochastic::DerivedBounds& bounds);

milp::MilpModel build_rum(const instance::Instance& inst,
                          const stochastic::ScenarioDraws& draws);

/// Read prices, offers, and choices out of an optimal solution and recompute
/// revenue. Throws DecodeMismatch when the recomputed average revenue differs
/// from solution.objective by more than 1e-6.
PricingOutcome decode(const milp::MilpModel& model, const milp::Solution& solution,
                      const instance::Instance& inst);

/// First-principles check of a decoded outcome: every chosen alternative is an
/// argmin of realized regret (argmax of utility for rum) over the alternatives
/// available at its turn, capacities are respected per scenario, and
/// availability is monotone along the priority order.
std::vector<instance::Violation> audit_solution(milp::ModelKind kind,
                                                const instance::Instance& inst,
                                                const stochastic::ScenarioDraws& draws,
                                                const stochastic::ERTable& er,
                                                const PricingOutcome& outcome);

/// Primal heuristic for the branch-and-bound: rounds the node LP's price-level
/// and offer variables to a supplier plan, simulates the sequential customers,
/// and lifts the result to a fully feasible assignment. The referenced inputs
/// must outlive the returned callable.
solver::HeuristicFn make_heuristic(const milp::MilpModel& model,
                                   const instance::Instance& inst,
                                   const stochastic::ScenarioDraws& draws,
                                   const stochastic::ERTable& er);

}  // namespace rrm::builders
