#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "rrm/builders.hpp"
#include "rrm/instance.hpp"
#include "rrm/stochastic.hpp"

namespace rrm::oracle {

enum class Behavior { Rrm, Rum };
enum class Mode { Uncap, Cap };

/// A complete supplier decision: one price level (or none = bare lp) per
/// (paid alternative, customer), plus per-(paid alternative, customer) offer
/// flags in capacitated mode. The opt-out is always offered.
struct SupplierPlan {
    std::map<std::pair<int, int>, std::optional<int>> level_choice;  // (alt, cust) -> level
    std::map<std::pair<int, int>, bool> offer;                       // (alt, cust) -> y_in

    double price(const instance::Instance& inst, int alt, int cust) const;
    bool offered(int alt, int cust) const;  // default true when absent
};

/// Walk customers in priority order per scenario: available = offered and
/// stock-remaining and in the choice set (opt-out always available); choose the
/// realized-regret argmin (rrm) or utility argmax (rum) over available
/// alternatives, ties broken by higher revenue then higher alternative id.
builders::PricingOutcome simulate_choices(const SupplierPlan& plan,
                                          const instance::Instance& inst,
                                          const stochastic::ScenarioDraws& draws,
                                          const stochastic::ERTable& er,
                                          Behavior behavior);

struct SearchSpaceTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    double avg_revenue = 0.0;
    SupplierPlan plan;
};

/// Exhaustive maximizer of average revenue over all supplier plans. Throws
/// SearchSpaceTooLarge (reporting the cardinality) beyond 10^7 plans. Ties
/// between plans resolve to the lexicographically first plan enumerated.
OracleResult oracle_optimize(const instance::Instance& inst,
                             const stochastic::ScenarioDraws& draws,
                             const stochastic::ERTable& er, Mode mode, Behavior behavior);

}  // namespace rrm::oracle
