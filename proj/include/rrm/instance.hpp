#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rrm::instance {

/// Alternative 0 is the opt-out: always offered, free, uncapacitated.
struct Alternative {
    int id = 0;
    std::optional<long> capacity;  // nullopt = unbounded
    std::map<std::string, double> attributes;
};

struct Customer {
    int id = 0;
    int priority_rank = 0;  // serving order, lower = earlier
    double beta_price = -1.0;
    std::map<std::string, double> beta_attrs;
    std::vector<int> choice_set;  // always contains 0
};

struct PriceGrid {
    double pm = 0.5;
    std::vector<int> levels;                      // shared level indices, ascending
    double lp_default = 1.0;
    double mp_default = 4.5;
    std::map<std::pair<int, int>, double> lp_override;  // (alternative, customer) -> bound
    std::map<std::pair<int, int>, double> mp_override;

    double lp(int alt, int cust) const;
    double mp(int alt, int cust) const;
};

struct Instance {
    std::vector<Customer> customers;
    std::vector<Alternative> alternatives;
    PriceGrid price;
    int scenario_count = 4;
    std::uint64_t seed = 0;
    bool positive_draws_only = true;

    const Alternative* alternative(int id) const;
    /// Customer indices sorted by priority_rank.
    std::vector<int> priority_order() const;
    /// Price levels usable for (alt, cust) after pruning lp + l*pm > mp.
    std::vector<int> feasible_levels(int alt, int cust) const;
    /// Union of non-price attribute names, sorted.
    std::vector<std::string> attribute_names() const;
};

struct Violation {
    std::string code;
    std::string message;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<Violation> validate(const Instance& inst);

Instance load(const std::string& text);
std::string save(const Instance& inst);  // canonical form: sorted keys, %.17g reals

/// FNV-1a hash of the canonical serialization.
std::uint64_t digest(const Instance& inst);

/// The paper-style experiment family: opt-out + two unlabeled paid alternatives,
/// homogeneous customers with beta_price = -1, price grid 1.0..4.5 in 0.5 steps,
/// 4 scenarios.
Instance synth_instance(int n_customers,
                        std::optional<std::pair<long, long>> capacities,
                        std::uint64_t seed);

}  // namespace rrm::instance
