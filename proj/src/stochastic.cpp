#include "rrm/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rrm::stochastic {

double gumbel_quantile(double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("gumbel_quantile: u must lie in (0,1)");
    return -std::log(-std::log(u));
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t key_hash(std::uint64_t seed, std::uint32_t role, std::int64_t a,
                       std::int64_t b, std::int64_t c, std::int64_t d,
                       std::uint64_t attempt) {
    std::uint64_t h = mix64(seed ^ 0x517cc1b727220a95ull);
    h = mix64(h ^ role);
    h = mix64(h ^ static_cast<std::uint64_t>(a));
    h = mix64(h ^ static_cast<std::uint64_t>(b));
    h = mix64(h ^ static_cast<std::uint64_t>(c));
    h = mix64(h ^ static_cast<std::uint64_t>(d));
    return mix64(h ^ attempt);
}

double to_unit_interval(std::uint64_t bits) {
    // 53 random bits shifted into (0,1), endpoints excluded.
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double keyed_gumbel(std::uint64_t seed, std::uint32_t role, std::int64_t a,
                    std::int64_t b, std::int64_t c, std::int64_t d,
                    bool truncate_positive) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        double g = gumbel_quantile(to_unit_interval(key_hash(seed, role, a, b, c, d, attempt)));
        if (!truncate_positive || g > 0.0) return g;
    }
}

ScenarioDraws sample_draws(const instance::Instance& inst) {
    ScenarioDraws out;
    out.instance_digest = instance::digest(inst);
    const int N = static_cast<int>(inst.customers.size());
    const int R = inst.scenario_count;
    const bool pos = inst.positive_draws_only;
    out.n_customers = N;
    out.n_scenarios = R;
    out.v_o.resize(static_cast<std::size_t>(N) * R);
    out.v.resize(static_cast<std::size_t>(N) * R);

    for (int n = 0; n < N; ++n) {
        const int cid = inst.customers[n].id;
        for (int r = 0; r < R; ++r) {
            out.v_o[n * R + r] = keyed_gumbel(inst.seed, kRolePriceOptOut, cid, 0, 0, r, pos);
            out.v[n * R + r] = keyed_gumbel(inst.seed, kRolePrice, cid, 0, 0, r, pos);
        }
    }

    const auto attrs = inst.attribute_names();
    const int X = static_cast<int>(attrs.size());
    out.v_attr_o.resize(static_cast<std::size_t>(N) * X * R);
    out.v_attr.resize(static_cast<std::size_t>(N) * X * R);
    for (int n = 0; n < N; ++n) {
        const int cid = inst.customers[n].id;
        for (int x = 0; x < X; ++x) {
            for (int r = 0; r < R; ++r) {
                const std::size_t idx = (static_cast<std::size_t>(n) * X + x) * R + r;
                out.v_attr_o[idx] =
                    keyed_gumbel(inst.seed, kRoleAttrOptOut, cid, x, 0, r, pos);
                out.v_attr[idx] = keyed_gumbel(inst.seed, kRoleAttr, cid, x, 0, r, pos);
            }
        }
    }

    const int I = static_cast<int>(inst.alternatives.size());
    out.v_util.resize(static_cast<std::size_t>(I) * N * R);
    for (int i = 0; i < I; ++i) {
        const int aid = inst.alternatives[i].id;
        for (int n = 0; n < N; ++n) {
            const int cid = inst.customers[n].id;
            for (int r = 0; r < R; ++r)
                out.v_util[(static_cast<std::size_t>(i) * N + n) * R + r] =
                    keyed_gumbel(inst.seed, kRoleRumUtility, aid, cid, 0, r, pos);
        }
    }
    return out;
}

std::uint64_t digest(const ScenarioDraws& draws) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix_bytes = [&h](const void* p, std::size_t len) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (std::size_t k = 0; k < len; ++k) {
            h ^= b[k];
            h *= 1099511628211ull;
        }
    };
    mix_bytes(&draws.instance_digest, sizeof draws.instance_digest);
    mix_bytes(&draws.n_customers, sizeof draws.n_customers);
    mix_bytes(&draws.n_scenarios, sizeof draws.n_scenarios);
    for (const auto* vec : {&draws.v_o, &draws.v, &draws.v_attr_o, &draws.v_attr, &draws.v_util})
        mix_bytes(vec->data(), vec->size() * sizeof(double));
    return h;
}

ScenarioDraws dominance_draws(const instance::Instance& inst) {
    ScenarioDraws out = sample_draws(inst);
    std::fill(out.v_o.begin(), out.v_o.end(), 10.0);
    std::fill(out.v.begin(), out.v.end(), 0.1);
    return out;
}

double pairwise_attr_regret(double beta, double x_i, double x_j, double v_o, double v) {
    return std::max(v_o, beta * (x_j - x_i) + v);
}

ERTable compute_er(const instance::Instance& inst, const ScenarioDraws& draws) {
    ERTable out;
    out.instance_digest = draws.instance_digest;
    const int I = static_cast<int>(inst.alternatives.size());
    const int N = static_cast<int>(inst.customers.size());
    const int R = inst.scenario_count;
    out.n_alts = I;
    out.n_customers = N;
    out.n_scenarios = R;
    out.er.assign(static_cast<std::size_t>(I) * I * N * R, 0.0);

    const auto attrs = inst.attribute_names();
    const int X = static_cast<int>(attrs.size());
    if (X == 0) return out;

    for (int n = 0; n < N; ++n) {
        const auto& cust = inst.customers[n];
        for (int i = 0; i < I; ++i) {
            for (int j = 0; j < I; ++j) {
                if (i == j) continue;
                for (int r = 0; r < R; ++r) {
                    double sum = 0.0;
                    for (int x = 0; x < X; ++x) {
                        const auto& name = attrs[x];
                        auto level = [&](const instance::Alternative& a) {
                            auto it = a.attributes.find(name);
                            return it == a.attributes.end() ? 0.0 : it->second;
                        };
                        auto beta_it = cust.beta_attrs.find(name);
                        double beta = beta_it == cust.beta_attrs.end() ? 0.0 : beta_it->second;
                        const std::size_t idx =
                            (static_cast<std::size_t>(n) * X + x) * R + r;
                        sum += pairwise_attr_regret(beta, level(inst.alternatives[i]),
                                                    level(inst.alternatives[j]),
                                                    draws.v_attr_o[idx], draws.v_attr[idx]);
                    }
                    out.at(i, j, n, r) = sum;
                }
            }
        }
    }
    return out;
}

namespace {

// Range of beta * (p_j - p_i) over the price boxes of both alternatives.
std::pair<double, double> price_term_range(double beta, double lp_i, double mp_i,
                                           double lp_j, double mp_j) {
    double d_lo = lp_j - mp_i, d_hi = mp_j - lp_i;
    double a = beta * d_lo, b = beta * d_hi;
    return {std::min(a, b), std::max(a, b)};
}

}  // namespace

DerivedBounds derive_bounds(const instance::Instance& inst, const ScenarioDraws& draws,
                            const ERTable& er) {
    DerivedBounds out;
    out.instance_digest = draws.instance_digest;
    const int I = static_cast<int>(inst.alternatives.size());
    const int N = static_cast<int>(inst.customers.size());
    const int R = inst.scenario_count;
    out.n_alts = I;
    out.n_customers = N;
    out.n_scenarios = R;
    const std::size_t pair_size = static_cast<std::size_t>(I) * I * N * R;
    out.mm.assign(pair_size, 0.0);
    out.ll.assign(pair_size, 0.0);
    out.m_pair.assign(pair_size, 0.0);
    out.m_alt.assign(static_cast<std::size_t>(I) * N * R, 0.0);
    out.l_alt.assign(static_cast<std::size_t>(I) * N * R, 0.0);
    out.m_cust.assign(static_cast<std::size_t>(N) * R, 0.0);
    out.l_cust.assign(static_cast<std::size_t>(N) * R, 0.0);
    out.m_cust_big.assign(static_cast<std::size_t>(N) * R, 0.0);
    out.m_global = 0.0;

    for (int n = 0; n < N; ++n) {
        const auto& cust = inst.customers[n];
        auto in_set = [&](int alt_id) {
            return std::find(cust.choice_set.begin(), cust.choice_set.end(), alt_id) !=
                   cust.choice_set.end();
        };
        for (int r = 0; r < R; ++r) {
            const double v_o = draws.vo(n, r), v = draws.vp(n, r);
            bool first_alt = true;
            for (int i = 0; i < I; ++i) {
                const int ai = inst.alternatives[i].id;
                if (!in_set(ai)) continue;
                double sum_m = 0.0, sum_l = 0.0;
                for (int j = 0; j < I; ++j) {
                    if (i == j) continue;
                    const int aj = inst.alternatives[j].id;
                    if (!in_set(aj)) continue;
                    auto [lo, hi] = price_term_range(
                        cust.beta_price, inst.price.lp(ai, cust.id),
                        inst.price.mp(ai, cust.id), inst.price.lp(aj, cust.id),
                        inst.price.mp(aj, cust.id));
                    const std::size_t idx = out.pair_idx(i, j, n, r);
                    double mm = std::max(v_o, hi + v);
                    double ll = std::min(v_o, lo + v);
                    out.mm[idx] = mm;
                    out.ll[idx] = ll;
                    out.m_pair[idx] = mm - ll;
                    const double e = er.at(i, j, n, r);
                    sum_m += mm + e;
                    sum_l += ll + e;
                    out.m_global = std::max({out.m_global, std::fabs(ll + e),
                                             std::fabs(mm + e)});
                }
                const std::size_t aidx = out.alt_idx(i, n, r);
                out.m_alt[aidx] = sum_m;
                out.l_alt[aidx] = sum_l;
                const std::size_t cidx = out.cust_idx(n, r);
                if (first_alt) {
                    out.m_cust[cidx] = sum_m;
                    out.l_cust[cidx] = sum_l;
                    first_alt = false;
                } else {
                    out.m_cust[cidx] = std::max(out.m_cust[cidx], sum_m);
                    out.l_cust[cidx] = std::min(out.l_cust[cidx], sum_l);
                }
            }
            const std::size_t cidx = out.cust_idx(n, r);
            out.m_cust_big[cidx] = out.m_cust[cidx] - out.l_cust[cidx];
        }
    }
    return out;
}

}  // namespace rrm::stochastic
