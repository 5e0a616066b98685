#pragma once

#include <cstdint>
#include <vector>

#include "rrm/instance.hpp"

namespace rrm::stochastic {

/// Inverse CDF of Gumbel(0,1): -ln(-ln u), strictly increasing on (0,1).
double gumbel_quantile(double u);

/// One value from the counter-based stream keyed on (seed, role, a, b, c, d).
/// With truncate_positive the stream is rejection-resampled until > 0.
double keyed_gumbel(std::uint64_t seed, std::uint32_t role, std::int64_t a,
                    std::int64_t b, std::int64_t c, std::int64_t d,
                    bool truncate_positive);

// Stream roles. Values are part of the reproducibility contract.
enum DrawRole : std::uint32_t {
    kRolePriceOptOut = 1,  // v_onr
    kRolePrice = 2,        // v_nr
    kRoleAttrOptOut = 3,   // v_onxr
    kRoleAttr = 4,         // v_nxkr
    kRoleRumUtility = 5,   // per-(i,n,r) utility noise
};

/// Per-(customer, scenario) draws, dense over customer index x scenario.
struct ScenarioDraws {
    std::uint64_t instance_digest = 0;
    int n_customers = 0;
    int n_scenarios = 0;
    std::vector<double> v_o;  // [cust * R + r]
    std::vector<double> v;    // [cust * R + r]
    // attribute draws: [((cust * X + x) * R) + r], single level slot k=0
    std::vector<double> v_attr_o;
    std::vector<double> v_attr;
    // RUM utility noise, indexed by alternative position in the instance list
    std::vector<double> v_util;  // [(alt_pos * N + cust) * R + r]

    double vo(int cust, int r) const { return v_o[cust * n_scenarios + r]; }
    double vp(int cust, int r) const { return v[cust * n_scenarios + r]; }
    double util(int alt_pos, int cust, int r) const {
        return v_util[(alt_pos * n_customers + cust) * n_scenarios + r];
    }
};

ScenarioDraws sample_draws(const instance::Instance& inst);

/// FNV-1a over the draw vectors' bit patterns; identifies the exact draws a
/// report row was computed from.
std::uint64_t digest(const ScenarioDraws& draws);

/// The Table 1 regime: v_onr = 10.0, v_nr = 0.1 everywhere, forcing regret ties
/// so the revenue-maximizing price is the optimum. Other streams stay sampled.
ScenarioDraws dominance_draws(const instance::Instance& inst);

/// max{v_o, beta * (x_j - x_i) + v}
double pairwise_attr_regret(double beta, double x_i, double x_j, double v_o, double v);

/// Non-price regret table ER, defined for i != j (alternative positions).
struct ERTable {
    std::uint64_t instance_digest = 0;
    int n_alts = 0, n_customers = 0, n_scenarios = 0;
    std::vector<double> er;

    double at(int i_pos, int j_pos, int cust, int r) const {
        return er[((i_pos * n_alts + j_pos) * n_customers + cust) * n_scenarios + r];
    }
    double& at(int i_pos, int j_pos, int cust, int r) {
        return er[((i_pos * n_alts + j_pos) * n_customers + cust) * n_scenarios + r];
    }
};

ERTable compute_er(const instance::Instance& inst, const ScenarioDraws& draws);

struct DerivedBounds {
    std::uint64_t instance_digest = 0;
    int n_alts = 0, n_customers = 0, n_scenarios = 0;
    std::vector<double> mm, ll;          // pairwise, same layout as ERTable::er
    std::vector<double> m_pair;          // mm - ll
    std::vector<double> m_alt, l_alt;    // [(i_pos * N + cust) * R + r]
    std::vector<double> m_cust, l_cust;  // [cust * R + r]
    std::vector<double> m_cust_big;      // m_cust - l_cust
    double m_global = 0.0;

    std::size_t pair_idx(int i, int j, int cust, int r) const {
        return ((static_cast<std::size_t>(i) * n_alts + j) * n_customers + cust) *
                   n_scenarios + r;
    }
    std::size_t alt_idx(int i, int cust, int r) const {
        return (static_cast<std::size_t>(i) * n_customers + cust) * n_scenarios + r;
    }
    std::size_t cust_idx(int cust, int r) const {
        return static_cast<std::size_t>(cust) * n_scenarios + r;
    }
};

DerivedBounds derive_bounds(const instance::Instance& inst, const ScenarioDraws& draws,
                            const ERTable& er);

}  // namespace rrm::stochastic
