#include "rrm/builders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "rrm/oracle.hpp"

namespace rrm::builders {

using instance::Instance;
using milp::LinConstraint;
using milp::MilpModel;
using milp::Sense;
using milp::Tag;
using milp::VarKind;
using stochastic::DerivedBounds;
using stochastic::ERTable;
using stochastic::ScenarioDraws;

namespace {

constexpr double kDecodeTol = 1e-6;
constexpr double kTieTol = 1e-9;

Tag tag(Tag::Role role, int i = -1, int j = -1, int n = -1, int r = -1, int l = -1) {
    Tag t;
    t.role = role;
    t.i = i;
    t.j = j;
    t.n = n;
    t.r = r;
    t.l = l;
    return t;
}

std::string lbl(const char* stem, std::initializer_list<int> idx) {
    std::string out = stem;
    for (int v : idx) {
        out += '_';
        out += std::to_string(v);
    }
    return out;
}

void check_digests(const Instance& inst, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t d = instance::digest(inst);
    if (a != d || b != d || c != d)
        throw InputMismatch("builder inputs derive from different instances");
}

/// Shared assembly state for one customer block.
struct Block {
    const Instance& inst;
    const instance::Customer& cust;
    int n_pos;  // position of the customer in the instance list (draw indexing)
    std::vector<int> alts;       // choice set, ascending, includes the opt-out
    std::vector<int> paid;       // choice set without the opt-out
    std::map<int, int> alt_pos;  // alternative id -> position in instance list

    Block(const Instance& inst_, int cust_idx) : inst(inst_), cust(inst_.customers[cust_idx]) {
        n_pos = cust_idx;
        alts = cust.choice_set;
        std::sort(alts.begin(), alts.end());
        for (int a : alts)
            if (a != 0) paid.push_back(a);
        for (std::size_t p = 0; p < inst.alternatives.size(); ++p)
            alt_pos[inst.alternatives[p].id] = static_cast<int>(p);
    }
};

/// Price-level machinery shared by all three builders: lambda and alpha
/// variables, alpha <= lambda, alpha <= w, sum lambda <= 1, price cap, and the
/// revenue objective. Returns lambda ids keyed (alt, level).
struct LevelVars {
    std::map<std::pair<int, int>, int> lam;          // (alt, level) -> id
    std::map<std::tuple<int, int, int>, int> alpha;  // (alt, r, level) -> id
};

LevelVars add_level_machinery(MilpModel& m, const Block& blk,
                              const std::map<std::pair<int, int>, int>& w_id) {
    const Instance& inst = blk.inst;
    const int R = inst.scenario_count;
    const int n = blk.cust.id;
    LevelVars lv;
    for (int i : blk.paid) {
        for (int l : inst.feasible_levels(i, n))
            lv.lam[{i, l}] = m.add_var(VarKind::Binary, 0.0, 1.0, tag(Tag::Role::Lambda, i, -1, n, -1, l));
        for (int r = 0; r < R; ++r)
            for (int l : inst.feasible_levels(i, n))
                lv.alpha[{i, r, l}] =
                    m.add_var(VarKind::Continuous, 0.0, 1.0, tag(Tag::Role::Alpha, i, -1, n, r, l));
    }
    for (int i : blk.paid) {
        for (int r = 0; r < R; ++r) {
            for (int l : inst.feasible_levels(i, n)) {
                int a = lv.alpha.at({i, r, l});
                m.add_constraint({{{a, 1.0}, {lv.lam.at({i, l}), -1.0}}, Sense::Le, 0.0,
                                  lbl("aL", {i, n, r, l})});
                m.add_constraint({{{a, 1.0}, {w_id.at({i, r}), -1.0}}, Sense::Le, 0.0,
                                  lbl("aW", {i, n, r, l})});
            }
        }
    }
    // one unit of alpha mass per purchase: sum_l alpha <= w. Without this the
    // relaxation can split lambda across levels and collect alpha for each.
    for (int i : blk.paid) {
        for (int r = 0; r < R; ++r) {
            LinConstraint agg;
            for (int l : inst.feasible_levels(i, n)) agg.terms.emplace_back(lv.alpha.at({i, r, l}), 1.0);
            agg.terms.emplace_back(w_id.at({i, r}), -1.0);
            agg.sense = Sense::Le;
            agg.rhs = 0.0;
            agg.label = lbl("aS", {i, n, r});
            m.add_constraint(std::move(agg));
        }
    }
    for (int i : blk.paid) {
        LinConstraint one_level;
        LinConstraint cap;
        for (int l : inst.feasible_levels(i, n)) {
            one_level.terms.emplace_back(lv.lam.at({i, l}), 1.0);
            cap.terms.emplace_back(lv.lam.at({i, l}), l * inst.price.pm);
        }
        one_level.sense = Sense::Le;
        one_level.rhs = 1.0;
        one_level.label = lbl("oneL", {i, n});
        cap.sense = Sense::Le;
        cap.rhs = inst.price.mp(i, n) - inst.price.lp(i, n);
        cap.label = lbl("pcap", {i, n});
        m.add_constraint(std::move(one_level));
        m.add_constraint(std::move(cap));
    }
    // objective: (1/R) * (lp * w + sum_l l*pm * alpha)
    for (int i : blk.paid) {
        for (int r = 0; r < R; ++r) {
            m.add_objective(w_id.at({i, r}), inst.price.lp(i, n) / R);
            for (int l : inst.feasible_levels(i, n))
                m.add_objective(lv.alpha.at({i, r, l}), l * inst.price.pm / R);
        }
    }
    return lv;
}

/// Adds the price expression beta*(p_j - p_i) of a pair to a constraint's
/// lambda terms with the given sign convention; returns the constant part
/// beta*(lp_j - lp_i). Used for RR linearization rows.
double add_price_terms(LinConstraint& c, const Block& blk, const LevelVars& lv, int i, int j,
                       double coef) {
    const Instance& inst = blk.inst;
    const int n = blk.cust.id;
    const double beta = blk.cust.beta_price;
    double constant = 0.0;
    if (j != 0) {
        constant += beta * inst.price.lp(j, n);
        for (int l : inst.feasible_levels(j, n))
            c.terms.emplace_back(lv.lam.at({j, l}), coef * beta * l * inst.price.pm);
    }
    if (i != 0) {
        constant -= beta * inst.price.lp(i, n);
        for (int l : inst.feasible_levels(i, n))
            c.terms.emplace_back(lv.lam.at({i, l}), -coef * beta * l * inst.price.pm);
    }
    return coef * constant;
}

/// RR max-linearization block shared by both RRM builders. Returns RR ids
/// keyed (i, j, r).
std::map<std::tuple<int, int, int>, int> add_rr_block(MilpModel& m, const Block& blk,
                                                      const LevelVars& lv,
                                                      const ScenarioDraws& draws,
                                                      const DerivedBounds& bounds) {
    const Instance& inst = blk.inst;
    const int R = inst.scenario_count;
    const int n = blk.cust.id;
    std::map<std::tuple<int, int, int>, int> rr_id;
    std::map<std::tuple<int, int, int>, int> b_id;
    for (int i : blk.alts) {
        for (int j : blk.alts) {
            if (i == j) continue;
            for (int r = 0; r < R; ++r) {
                std::size_t pidx = bounds.pair_idx(blk.alt_pos.at(i), blk.alt_pos.at(j),
                                                   blk.n_pos, r);
                rr_id[{i, j, r}] = m.add_var(VarKind::Continuous, bounds.ll[pidx],
                                             bounds.mm[pidx], tag(Tag::Role::RR, i, j, n, r));
                b_id[{i, j, r}] =
                    m.add_var(VarKind::Binary, 0.0, 1.0, tag(Tag::Role::B, i, j, n, r));
            }
        }
    }
    for (int i : blk.alts) {
        for (int j : blk.alts) {
            if (i == j) continue;
            for (int r = 0; r < R; ++r) {
                const int rr = rr_id.at({i, j, r});
                const int b = b_id.at({i, j, r});
                const double v_o = draws.vo(blk.n_pos, r);
                const double v = draws.vp(blk.n_pos, r);
                const double M =
                    bounds.m_pair[bounds.pair_idx(blk.alt_pos.at(i), blk.alt_pos.at(j),
                                                  blk.n_pos, r)];
                // RR >= v_o
                m.add_constraint({{{rr, 1.0}}, Sense::Ge, v_o, lbl("rA", {i, j, n, r})});
                // RR >= beta*(p_j - p_i) + v
                LinConstraint c2;
                c2.terms.emplace_back(rr, 1.0);
                // moves the lambda part of beta*(p_j - p_i) to the left side;
                // returns -beta*(lp_j - lp_i), the constant left behind
                double k2 = add_price_terms(c2, blk, lv, i, j, -1.0);
                c2.sense = Sense::Ge;
                c2.rhs = v - k2;
                c2.label = lbl("rB", {i, j, n, r});
                m.add_constraint(std::move(c2));
                // RR <= v_o + M*b
                m.add_constraint({{{rr, 1.0}, {b, -M}}, Sense::Le, v_o, lbl("rC", {i, j, n, r})});
                // RR <= beta*(p_j - p_i) + v + M*(1-b)
                LinConstraint c4;
                c4.terms.emplace_back(rr, 1.0);
                double k4 = add_price_terms(c4, blk, lv, i, j, -1.0);
                c4.terms.emplace_back(b, M);
                c4.sense = Sense::Le;
                c4.rhs = v - k4 + M;
                c4.label = lbl("rD", {i, j, n, r});
                m.add_constraint(std::move(c4));

                // Level-disaggregated upper bounds: the big-M pair above lets
                // the relaxation inflate RR by M/2 at b = 1/2, which props up
                // the regret of unchosen alternatives and keeps the bound at
                // the revenue ceiling. Conditioning the ceiling on each side's
                // own price level pins RR once that side's lambdas go
                // integral, independent of b.
                const double beta = blk.cust.beta_price;
                auto price = [&](int a, std::optional<int> l) {
                    if (a == 0) return 0.0;
                    return inst.price.lp(a, n) + (l ? *l * inst.price.pm : 0.0);
                };
                auto extreme = [&](int a, double sgn) {
                    // max over a's price set of sgn * beta * p_a
                    double best = sgn * beta * price(a, std::nullopt);
                    if (a != 0)
                        for (int l : inst.feasible_levels(a, n))
                            best = std::max(best, sgn * beta * price(a, l));
                    return best;
                };
                if (j != 0) {  // ceiling as a function of j's level
                    const double other = extreme(i, -1.0);  // max of -beta*p_i
                    auto ceil_at = [&](std::optional<int> l) {
                        return std::max(v_o, beta * price(j, l) + other + v);
                    };
                    const double u0 = ceil_at(std::nullopt);
                    LinConstraint cj;
                    cj.terms.emplace_back(rr, 1.0);
                    for (int l : inst.feasible_levels(j, n))
                        cj.terms.emplace_back(lv.lam.at({j, l}), u0 - ceil_at(l));
                    cj.sense = Sense::Le;
                    cj.rhs = u0;
                    cj.label = lbl("rE", {i, j, n, r});
                    m.add_constraint(std::move(cj));
                }
                if (i != 0) {  // ceiling as a function of i's level
                    const double other = extreme(j, 1.0);  // max of beta*p_j
                    auto ceil_at = [&](std::optional<int> l) {
                        return std::max(v_o, other - beta * price(i, l) + v);
                    };
                    const double u0 = ceil_at(std::nullopt);
                    LinConstraint ci;
                    ci.terms.emplace_back(rr, 1.0);
                    for (int l : inst.feasible_levels(i, n))
                        ci.terms.emplace_back(lv.lam.at({i, l}), u0 - ceil_at(l));
                    ci.sense = Sense::Le;
                    ci.rhs = u0;
                    ci.label = lbl("rF", {i, j, n, r});
                    m.add_constraint(std::move(ci));
                }
            }
        }
    }
    return rr_id;
}

/// Presolve: a sale of alternative i at price p only happens when its realized
/// regret does not exceed the opt-out's (ties sell, by the revenue tie-break).
/// When the regret difference is strictly positive for every configuration of
/// the other alternatives' prices (and, in capacitated mode, availability),
/// the sale is impossible: the level's alpha (or the whole w when even the
/// bare price cannot sell) is fixed to zero. This lowers the relaxation's
/// revenue ceiling from the price grid's top to the prices the customer can
/// actually be charged, which is what makes the search tree tractable.
void prune_unsellable_rrm(MilpModel& m, const Block& blk, const LevelVars& lv,
                          const std::map<std::pair<int, int>, int>& w_id,
                          const ScenarioDraws& draws, const ERTable& er, bool cap) {
    const Instance& inst = blk.inst;
    const int R = inst.scenario_count;
    const int n = blk.cust.id;
    const double beta = blk.cust.beta_price;
    constexpr double tol = 1e-7;
    auto prices = [&](int a) {
        std::vector<double> p{inst.price.lp(a, n)};
        for (int l : inst.feasible_levels(a, n))
            p.push_back(inst.price.lp(a, n) + l * inst.price.pm);
        return p;
    };
    for (int i : blk.paid) {
        const auto ai = blk.alt_pos.at(i);
        const auto a0 = blk.alt_pos.at(0);
        for (int r = 0; r < R; ++r) {
            const double v_o = draws.vo(blk.n_pos, r);
            const double v = draws.vp(blk.n_pos, r);
            // min over the other alternatives' configurations of R_i - R_0
            auto delta_min = [&](double p) {
                double d = std::max(v_o, -beta * p + v) + er.at(ai, a0, blk.n_pos, r) -
                           std::max(v_o, beta * p + v) - er.at(a0, ai, blk.n_pos, r);
                for (int j : blk.paid) {
                    if (j == i) continue;
                    const auto aj = blk.alt_pos.at(j);
                    double h = std::numeric_limits<double>::infinity();
                    for (double pj : prices(j))
                        h = std::min(h, std::max(v_o, beta * (pj - p) + v) +
                                            er.at(ai, aj, blk.n_pos, r) -
                                            std::max(v_o, beta * pj + v) -
                                            er.at(a0, aj, blk.n_pos, r));
                    if (cap) h = std::min(h, 0.0);  // j may be unavailable
                    d += h;
                }
                return d;
            };
            bool all_gone = delta_min(inst.price.lp(i, n)) > tol;  // bare price
            for (int l : inst.feasible_levels(i, n)) {
                if (delta_min(inst.price.lp(i, n) + l * inst.price.pm) > tol)
                    m.variables[lv.alpha.at({i, r, l})].upper = 0.0;
                else
                    all_gone = false;
            }
            if (all_gone) m.variables[w_id.at({i, r})].upper = 0.0;
        }
    }
}

}  // namespace


MilpModel build_rrm_uncap(const Instance& inst, const ScenarioDraws& draws, const ERTable& er,
                          const DerivedBounds& bounds) {
    check_digests(inst, draws.instance_digest, er.instance_digest, bounds.instance_digest);
    MilpModel m;
    m.kind = milp::ModelKind::RrmUncap;
    m.instance_digest = draws.instance_digest;
    const int R = inst.scenario_count;

    for (std::size_t ci = 0; ci < inst.customers.size(); ++ci) {
        Block blk(inst, static_cast<int>(ci));
        const int n = blk.cust.id;

        std::map<std::pair<int, int>, int> w_id;  // (alt, r)
        for (int i : blk.alts)
            for (int r = 0; r < R; ++r)
                w_id[{i, r}] = m.add_var(VarKind::Binary, 0.0, 1.0, tag(Tag::Role::W, i, -1, n, r));

        LevelVars lv = add_level_machinery(m, blk, w_id);
        prune_unsellable_rrm(m, blk, lv, w_id, draws, er, false);
        auto rr_id = add_rr_block(m, blk, lv, draws, bounds);

        std::map<std::pair<int, int>, int> ra_id;  // (alt, r)
        std::map<int, int> rc_id;                  // r
        for (int i : blk.alts)
            for (int r = 0; r < R; ++r) {
                std::size_t ai = bounds.alt_idx(blk.alt_pos.at(i), blk.n_pos, r);
                ra_id[{i, r}] = m.add_var(VarKind::Continuous, bounds.l_alt[ai], bounds.m_alt[ai],
                                          tag(Tag::Role::RAlt, i, -1, n, r));
            }
        for (int r = 0; r < R; ++r) {
            std::size_t cx = bounds.cust_idx(blk.n_pos, r);
            rc_id[r] = m.add_var(VarKind::Continuous, bounds.l_cust[cx], bounds.m_cust[cx],
                                 tag(Tag::Role::RCust, -1, -1, n, r));
        }

        // R_alt = sum_{j != i} (RR + er)
        for (int i : blk.alts) {
            for (int r = 0; r < R; ++r) {
                LinConstraint c;
                c.terms.emplace_back(ra_id.at({i, r}), 1.0);
                double er_sum = 0.0;
                for (int j : blk.alts) {
                    if (j == i) continue;
                    c.terms.emplace_back(rr_id.at({i, j, r}), -1.0);
                    er_sum += er.at(blk.alt_pos.at(i), blk.alt_pos.at(j), blk.n_pos, r);
                }
                c.sense = Sense::Eq;
                c.rhs = er_sum;
                c.label = lbl("ra", {i, n, r});
                m.add_constraint(std::move(c));
            }
        }
        // argmin selection
        for (int i : blk.alts) {
            for (int r = 0; r < R; ++r) {
                const double Mc = bounds.m_cust_big[bounds.cust_idx(blk.n_pos, r)];
                m.add_constraint({{{rc_id.at(r), 1.0}, {ra_id.at({i, r}), -1.0}}, Sense::Le, 0.0,
                                  lbl("s1", {i, n, r})});
                m.add_constraint({{{ra_id.at({i, r}), 1.0}, {rc_id.at(r), -1.0},
                                   {w_id.at({i, r}), Mc}},
                                  Sense::Le, Mc, lbl("s2", {i, n, r})});
            }
        }
        // at most one choice per scenario
        for (int r = 0; r < R; ++r) {
            LinConstraint one;
            for (int i : blk.alts) one.terms.emplace_back(w_id.at({i, r}), 1.0);
            one.sense = Sense::Le;
            one.rhs = 1.0;
            one.label = lbl("one", {n, r});
            m.add_constraint(std::move(one));
        }
    }
    return m;
}

MilpModel build_rrm_cap(const Instance& inst, const ScenarioDraws& draws, const ERTable& er,
                        const DerivedBounds& bounds) {
    check_digests(inst, draws.instance_digest, er.instance_digest, bounds.instance_digest);
    MilpModel m;
    m.kind = milp::ModelKind::RrmCap;
    m.instance_digest = draws.instance_digest;
    const int R = inst.scenario_count;
    const int N = static_cast<int>(inst.customers.size());
    const auto order = inst.priority_order();

    // variable ids shared across customer blocks (chains and counting rows)
    std::map<std::pair<int, int>, int> y_id;                // (alt, cust) -> y_in
    std::map<std::tuple<int, int, int>, int> ya_id;         // (alt, cust, r) -> y_inr
    std::map<std::tuple<int, int, int>, int> w_all;         // (alt, cust, r)
    std::map<int, Block> blocks;                            // cust idx -> block

    for (std::size_t ci = 0; ci < inst.customers.size(); ++ci) {
        Block blk(inst, static_cast<int>(ci));
        const int n = blk.cust.id;

        std::map<std::pair<int, int>, int> w_id;
        for (int i : blk.alts) {
            double fix = i == 0 ? 1.0 : 0.0;  // opt-out always offered/available
            y_id[{i, n}] = m.add_var(VarKind::Binary, fix, 1.0, tag(Tag::Role::YOffer, i, -1, n));
            for (int r = 0; r < R; ++r)
                ya_id[{i, n, r}] =
                    m.add_var(VarKind::Binary, fix, 1.0, tag(Tag::Role::YAvail, i, -1, n, r));
            for (int r = 0; r < R; ++r) {
                int w = m.add_var(VarKind::Binary, 0.0, 1.0, tag(Tag::Role::W, i, -1, n, r));
                w_id[{i, r}] = w;
                w_all[{i, n, r}] = w;
            }
        }

        LevelVars lv = add_level_machinery(m, blk, w_id);
        prune_unsellable_rrm(m, blk, lv, w_id, draws, er, true);

        // availability only tightens: y_inr <= y_in
        for (int i : blk.alts)
            for (int r = 0; r < R; ++r)
                m.add_constraint({{{ya_id.at({i, n, r}), 1.0}, {y_id.at({i, n}), -1.0}},
                                  Sense::Le, 0.0, lbl("yy", {i, n, r})});

        auto rr_id = add_rr_block(m, blk, lv, draws, bounds);

        // discounted regret z = (RR + er) * y_jnr
        std::map<std::tuple<int, int, int>, int> z_id;
        for (int i : blk.alts) {
            for (int j : blk.alts) {
                if (i == j) continue;
                for (int r = 0; r < R; ++r) {
                    std::size_t pidx = bounds.pair_idx(blk.alt_pos.at(i), blk.alt_pos.at(j),
                                                       blk.n_pos, r);
                    double e = er.at(blk.alt_pos.at(i), blk.alt_pos.at(j), blk.n_pos, r);
                    double ql = bounds.ll[pidx] + e, qu = bounds.mm[pidx] + e;
                    z_id[{i, j, r}] =
                        m.add_var(VarKind::Continuous, std::min(0.0, ql), std::max(0.0, qu),
                                  tag(Tag::Role::Z, i, j, n, r));
                }
            }
        }
        for (int i : blk.alts) {
            for (int j : blk.alts) {
                if (i == j) continue;
                for (int r = 0; r < R; ++r) {
                    std::size_t pidx = bounds.pair_idx(blk.alt_pos.at(i), blk.alt_pos.at(j),
                                                       blk.n_pos, r);
                    double e = er.at(blk.alt_pos.at(i), blk.alt_pos.at(j), blk.n_pos, r);
                    double ql = bounds.ll[pidx] + e, qu = bounds.mm[pidx] + e;
                    int z = z_id.at({i, j, r});
                    int rr = rr_id.at({i, j, r});
                    int ya = ya_id.at({j, n, r});
                    // z <= (RR + er) - ql*(1 - y_jnr)
                    m.add_constraint({{{z, 1.0}, {rr, -1.0}, {ya, -ql}}, Sense::Le, e - ql,
                                      lbl("zA", {i, j, n, r})});
                    // z >= (RR + er) - qu*(1 - y_jnr)
                    m.add_constraint({{{rr, 1.0}, {z, -1.0}, {ya, qu}}, Sense::Le, qu - e,
                                      lbl("zB", {i, j, n, r})});
                    // z <= qu * y_jnr
                    m.add_constraint({{{z, 1.0}, {ya, -qu}}, Sense::Le, 0.0,
                                      lbl("zC", {i, j, n, r})});
                    // z >= ql * y_jnr
                    m.add_constraint({{{ya, ql}, {z, -1.0}}, Sense::Le, 0.0,
                                      lbl("zD", {i, j, n, r})});
                    // z >= min(0, ql)
                    m.add_constraint({{{z, 1.0}}, Sense::Ge, std::min(0.0, ql),
                                      lbl("zE", {i, j, n, r})});
                }
            }
        }

        std::map<std::pair<int, int>, int> ra_id;
        std::map<int, int> rc_id;
        for (int i : blk.alts)
            for (int r = 0; r < R; ++r) {
                std::size_t ai = bounds.alt_idx(blk.alt_pos.at(i), blk.n_pos, r);
                ra_id[{i, r}] = m.add_var(VarKind::Continuous, std::min(0.0, bounds.l_alt[ai]),
                                          std::max(0.0, bounds.m_alt[ai]),
                                          tag(Tag::Role::RAlt, i, -1, n, r));
            }
        for (int r = 0; r < R; ++r) {
            std::size_t cx = bounds.cust_idx(blk.n_pos, r);
            rc_id[r] = m.add_var(VarKind::Continuous, std::min(0.0, bounds.l_cust[cx]),
                                 bounds.m_cust[cx], tag(Tag::Role::RCust, -1, -1, n, r));
        }

        // R_alt = sum_{j != i} z
        for (int i : blk.alts) {
            for (int r = 0; r < R; ++r) {
                LinConstraint c;
                c.terms.emplace_back(ra_id.at({i, r}), 1.0);
                for (int j : blk.alts) {
                    if (j == i) continue;
                    c.terms.emplace_back(z_id.at({i, j, r}), -1.0);
                }
                c.sense = Sense::Eq;
                c.rhs = 0.0;
                c.label = lbl("ra", {i, n, r});
                m.add_constraint(std::move(c));
            }
        }

        // can only choose what is available; argmin over available alternatives
        for (int i : blk.alts) {
            for (int r = 0; r < R; ++r) {
                std::size_t cx = bounds.cust_idx(blk.n_pos, r);
                const double Ms =
                    std::max(0.0, bounds.m_cust[cx]) - std::min(0.0, bounds.l_cust[cx]);
                m.add_constraint({{{w_id.at({i, r}), 1.0}, {ya_id.at({i, n, r}), -1.0}},
                                  Sense::Le, 0.0, lbl("wy", {i, n, r})});
                m.add_constraint({{{rc_id.at(r), 1.0}, {ra_id.at({i, r}), -1.0},
                                   {ya_id.at({i, n, r}), Ms}},
                                  Sense::Le, Ms, lbl("s1", {i, n, r})});
                m.add_constraint({{{ra_id.at({i, r}), 1.0}, {rc_id.at(r), -1.0},
                                   {w_id.at({i, r}), Ms}},
                                  Sense::Le, Ms, lbl("s2", {i, n, r})});
            }
        }
        for (int r = 0; r < R; ++r) {
            LinConstraint one;
            for (int i : blk.alts) one.terms.emplace_back(w_id.at({i, r}), 1.0);
            one.sense = Sense::Le;
            one.rhs = 1.0;
            one.label = lbl("one", {n, r});
            m.add_constraint(std::move(one));
        }
        blocks.emplace(static_cast<int>(ci), std::move(blk));
    }

    // cross-customer rows in priority order
    for (std::size_t k = 0; k < order.size(); ++k) {
        const Block& blk = blocks.at(order[k]);
        const int n = blk.cust.id;
        const long pos = static_cast<long>(k) + 1;  // 1-based priority position

        // availability chain to the next customer (shared alternatives only)
        if (k + 1 < order.size()) {
            const Block& nxt = blocks.at(order[k + 1]);
            for (int i : blk.alts) {
                if (!ya_id.count({i, nxt.cust.id, 0})) continue;
                for (int r = 0; r < R; ++r)
                    m.add_constraint({{{ya_id.at({i, nxt.cust.id, r}), 1.0},
                                       {ya_id.at({i, n, r}), -1.0}},
                                      Sense::Le, 0.0, lbl("ch", {i, n, r})});
            }
        }

        for (int i : blk.paid) {
            const auto* alt = inst.alternative(i);
            const long c_i = alt->capacity ? *alt->capacity : std::numeric_limits<long>::max();
            const double c_eff = static_cast<double>(std::min<long>(c_i, N));
            for (int r = 0; r < R; ++r) {
                // counting row for n past the capacity: exhausted stock forces y = 0
                if (alt->capacity && pos > c_i) {
                    LinConstraint c;
                    for (std::size_t mq = 0; mq < k; ++mq) {
                        auto it = w_all.find({i, blocks.at(order[mq]).cust.id, r});
                        if (it != w_all.end()) c.terms.emplace_back(it->second, 1.0);
                    }
                    c.terms.emplace_back(ya_id.at({i, n, r}), double(N - c_i));
                    c.sense = Sense::Le;
                    c.rhs = double(N - 1);
                    c.label = lbl("cnt", {i, n, r});
                    m.add_constraint(std::move(c));
                }
                // while stock remains, an offered alternative stays available
                LinConstraint c;
                c.terms.emplace_back(y_id.at({i, n}), c_eff);
                c.terms.emplace_back(ya_id.at({i, n, r}), -c_eff);
                for (std::size_t mq = 0; mq < k; ++mq) {
                    auto it = w_all.find({i, blocks.at(order[mq]).cust.id, r});
                    if (it != w_all.end()) c.terms.emplace_back(it->second, -1.0);
                }
                c.sense = Sense::Le;
                c.rhs = 0.0;
                c.label = lbl("stk", {i, n, r});
                m.add_constraint(std::move(c));
                // valid prefix cut: total sales up to this customer within capacity
                if (alt->capacity) {
                    LinConstraint cut;
                    for (std::size_t mq = 0; mq <= k; ++mq) {
                        auto it = w_all.find({i, blocks.at(order[mq]).cust.id, r});
                        if (it != w_all.end()) cut.terms.emplace_back(it->second, 1.0);
                    }
                    cut.sense = Sense::Le;
                    cut.rhs = double(c_i);
                    cut.label = lbl("cap", {i, n, r});
                    m.add_constraint(std::move(cut));
                }
            }
        }
    }
    return m;
}

MilpModel build_rum(const Instance& inst, const ScenarioDraws& draws) {
    std::uint64_t d = instance::digest(inst);
    if (draws.instance_digest != d)
        throw InputMismatch("builder inputs derive from different instances");
    MilpModel m;
    m.kind = milp::ModelKind::Rum;
    m.instance_digest = d;
    const int R = inst.scenario_count;

    for (std::size_t ci = 0; ci < inst.customers.size(); ++ci) {
        Block blk(inst, static_cast<int>(ci));
        const int n = blk.cust.id;
        const double beta = blk.cust.beta_price;

        std::map<std::pair<int, int>, int> w_id;
        for (int i : blk.alts)
            for (int r = 0; r < R; ++r)
                w_id[{i, r}] = m.add_var(VarKind::Binary, 0.0, 1.0, tag(Tag::Role::W, i, -1, n, r));

        LevelVars lv = add_level_machinery(m, blk, w_id);

        // Presolve: under utility maximization a sale of i at price p needs
        // beta*p + u_i >= u_0 (ties sell); other alternatives can only make
        // things worse, so levels priced beyond that point cannot sell.
        for (int i : blk.paid) {
            for (int r = 0; r < R; ++r) {
                const double slack_at = draws.util(blk.alt_pos.at(0), blk.n_pos, r) -
                                        draws.util(blk.alt_pos.at(i), blk.n_pos, r);
                auto unsellable = [&](double p) { return beta * p < slack_at - 1e-7; };
                bool all_gone = unsellable(inst.price.lp(i, n));
                for (int l : inst.feasible_levels(i, n)) {
                    if (unsellable(inst.price.lp(i, n) + l * inst.price.pm))
                        m.variables[lv.alpha.at({i, r, l})].upper = 0.0;
                    else
                        all_gone = false;
                }
                if (all_gone) m.variables[w_id.at({i, r})].upper = 0.0;
            }
        }

        // utility bounds per (i, r)
        auto u_range = [&](int i, int r) -> std::pair<double, double> {
            double v = draws.util(blk.alt_pos.at(i), blk.n_pos, r);
            if (i == 0) return {v, v};
            double a = beta * inst.price.lp(i, n), b = beta * inst.price.mp(i, n);
            return {std::min(a, b) + v, std::max(a, b) + v};
        };

        std::map<std::pair<int, int>, int> u_id;
        std::map<int, int> umax_id;
        for (int i : blk.alts)
            for (int r = 0; r < R; ++r) {
                auto [lo, hi] = u_range(i, r);
                u_id[{i, r}] =
                    m.add_var(VarKind::Continuous, lo, hi, tag(Tag::Role::U, i, -1, n, r));
            }
        for (int r = 0; r < R; ++r) {
            double lo = -milp::kInf, hi = -milp::kInf;
            for (int i : blk.alts) {
                auto [l, h] = u_range(i, r);
                lo = std::max(lo, l);
                hi = std::max(hi, h);
            }
            umax_id[r] = m.add_var(VarKind::Continuous, lo, hi, tag(Tag::Role::UMax, -1, -1, n, r));
        }

        for (int r = 0; r < R; ++r) {
            double u_lo_min = milp::kInf, u_hi_max = -milp::kInf;
            for (int i : blk.alts) {
                auto [l, h] = u_range(i, r);
                u_lo_min = std::min(u_lo_min, l);
                u_hi_max = std::max(u_hi_max, h);
            }
            const double Mu = u_hi_max - u_lo_min;
            for (int i : blk.alts) {
                // U = beta*(lp + sum l*pm*lambda) + v_util
                LinConstraint eq;
                eq.terms.emplace_back(u_id.at({i, r}), 1.0);
                double rhs = draws.util(blk.alt_pos.at(i), blk.n_pos, r);
                if (i != 0) {
                    rhs += beta * inst.price.lp(i, n);
                    for (int l : inst.feasible_levels(i, n))
                        eq.terms.emplace_back(lv.lam.at({i, l}), -beta * l * inst.price.pm);
                }
                eq.sense = Sense::Eq;
                eq.rhs = rhs;
                eq.label = lbl("ue", {i, n, r});
                m.add_constraint(std::move(eq));
                // U_max >= U_i
                m.add_constraint({{{u_id.at({i, r}), 1.0}, {umax_id.at(r), -1.0}}, Sense::Le,
                                  0.0, lbl("m1", {i, n, r})});
                // chosen alternative attains the max
                m.add_constraint({{{umax_id.at(r), 1.0}, {u_id.at({i, r}), -1.0},
                                   {w_id.at({i, r}), Mu}},
                                  Sense::Le, Mu, lbl("m2", {i, n, r})});
            }
            LinConstraint one;
            for (int i : blk.alts) one.terms.emplace_back(w_id.at({i, r}), 1.0);
            one.sense = Sense::Le;
            one.rhs = 1.0;
            one.label = lbl("one", {n, r});
            m.add_constraint(std::move(one));
        }
    }
    return m;
}

PricingOutcome decode(const MilpModel& model, const milp::Solution& solution,
                      const Instance& inst) {
    if (solution.status != milp::SolveStatus::Optimal &&
        solution.status != milp::SolveStatus::TimeLimit)
        throw std::invalid_argument("decode: no incumbent to decode");
    if (solution.values.size() != model.variables.size())
        throw std::invalid_argument("decode: solution/model size mismatch");

    PricingOutcome out;
    const int R = inst.scenario_count;
    for (const auto& c : inst.customers) {
        for (int aid : c.choice_set) {
            if (aid == 0) continue;
            out.price[{aid, c.id}] = inst.price.lp(aid, c.id);
            out.offered[{aid, c.id}] = true;
        }
        for (int r = 0; r < R; ++r) out.chosen[{c.id, r}] = std::nullopt;
    }
    for (const auto& v : model.variables) {
        double xv = solution.values[v.id];
        const Tag& t = v.tag;
        if (t.role == Tag::Role::Lambda && xv > 0.5) {
            out.price[{t.i, t.n}] = inst.price.lp(t.i, t.n) + t.l * inst.price.pm;
        } else if (t.role == Tag::Role::W && xv > 0.5) {
            out.chosen[{t.n, t.r}] = t.i;
        } else if (t.role == Tag::Role::YOffer && t.i != 0) {
            out.offered[{t.i, t.n}] = xv > 0.5;
        }
    }

    double total = 0.0;
    for (int r = 0; r < R; ++r) {
        double rev = 0.0;
        for (const auto& c : inst.customers) {
            const auto& ch = out.chosen.at({c.id, r});
            if (ch && *ch != 0) rev += out.price.at({*ch, c.id});
        }
        out.revenue_per_scenario[r] = rev;
        total += rev;
    }
    out.avg_revenue = total / R;
    if (std::fabs(out.avg_revenue - solution.objective) > kDecodeTol)
        throw DecodeMismatch("decoded revenue " + std::to_string(out.avg_revenue) +
                             " differs from solver objective " +
                             std::to_string(solution.objective));
    return out;
}

std::vector<instance::Violation> audit_solution(milp::ModelKind kind, const Instance& inst,
                                                const ScenarioDraws& draws, const ERTable& er,
                                                const PricingOutcome& outcome) {
    std::vector<instance::Violation> out;
    auto add = [&](std::string code, std::string msg) {
        out.push_back({std::move(code), std::move(msg)});
    };
    const bool cap = kind == milp::ModelKind::RrmCap;
    const bool rum = kind == milp::ModelKind::Rum;
    const int R = inst.scenario_count;
    const int I = static_cast<int>(inst.alternatives.size());
    const auto order = inst.priority_order();

    std::map<int, int> alt_pos;
    for (int p = 0; p < I; ++p) alt_pos[inst.alternatives[p].id] = p;

    auto price_of = [&](int alt, int cust) {
        if (alt == 0) return 0.0;
        auto it = outcome.price.find({alt, cust});
        return it == outcome.price.end() ? inst.price.lp(alt, cust) : it->second;
    };
    auto offered = [&](int alt, int cust) {
        if (alt == 0) return true;
        auto it = outcome.offered.find({alt, cust});
        return it == outcome.offered.end() ? true : it->second;
    };

    for (int r = 0; r < R; ++r) {
        std::vector<long> stock(I, std::numeric_limits<long>::max());
        if (cap)
            for (int p = 0; p < I; ++p)
                if (inst.alternatives[p].capacity) stock[p] = *inst.alternatives[p].capacity;

        for (std::size_t k = 0; k < order.size(); ++k) {
            const auto& cust = inst.customers[order[k]];
            const int n_pos = order[k];
            auto at = [&](int a, int b) { return std::to_string(a) + "," + std::to_string(b); };

            std::vector<int> avail;
            for (int aid : cust.choice_set)
                if (aid == 0 || (offered(aid, cust.id) && stock[alt_pos[aid]] > 0))
                    avail.push_back(aid);

            auto score = [&](int i) {  // higher is better
                if (rum)
                    return cust.beta_price * price_of(i, cust.id) +
                           draws.util(alt_pos[i], n_pos, r);
                double regret = 0.0;
                for (int j : avail) {
                    if (j == i) continue;
                    regret += std::max(draws.vo(n_pos, r),
                                       cust.beta_price *
                                               (price_of(j, cust.id) - price_of(i, cust.id)) +
                                           draws.vp(n_pos, r)) +
                              er.at(alt_pos[i], alt_pos[j], n_pos, r);
                }
                return -regret;
            };

            double best = -std::numeric_limits<double>::infinity();
            for (int i : avail) best = std::max(best, score(i));

            const auto& ch = outcome.chosen.at({cust.id, r});
            int chosen = ch ? *ch : 0;  // un-set w behaves like a no-purchase
            if (ch && *ch != 0) {
                if (std::find(cust.choice_set.begin(), cust.choice_set.end(), *ch) ==
                    cust.choice_set.end()) {
                    add("choice-outside-set", "customer " + std::to_string(cust.id) +
                                                  " scenario " + std::to_string(r));
                    continue;
                }
                if (!offered(*ch, cust.id))
                    add("unavailable-choice",
                        "withheld alternative chosen at (" + at(cust.id, r) + ")");
                if (cap && stock[alt_pos[*ch]] <= 0)
                    add("capacity-exceeded",
                        "alternative " + std::to_string(*ch) + " oversold at (" + at(cust.id, r) + ")");
            }
            if (score(chosen) < best - kDecodeTol)
                add("not-argmin", "choice at (" + at(cust.id, r) + ") is not a " +
                                      (rum ? std::string("utility argmax") :
                                             std::string("regret argmin")));
            if (chosen != 0 && cap) --stock[alt_pos[chosen]];
        }
    }
    return out;
}

// ---- primal heuristic: round, simulate, lift ----

namespace {

struct Lifter {
    const MilpModel* model;
    const Instance* inst;
    const ScenarioDraws* draws;
    const ERTable* er;

    // Coordinate descent over customers: each customer's (offer, level) block
    // is enumerated exhaustively against the simulated population revenue.
    // Customers are independent without capacities, so a single pass lands on
    // the exact optimum; with capacities it is a priority-order greedy.
    void improve(oracle::SupplierPlan& plan, bool rum, bool cap) const {
        const auto behavior = rum ? oracle::Behavior::Rum : oracle::Behavior::Rrm;
        auto value = [&](const oracle::SupplierPlan& p) {
            return oracle::simulate_choices(p, *inst, *draws, *er, behavior).avg_revenue;
        };
        double best = value(plan);
        for (int pass = 0; pass < (cap ? 2 : 1); ++pass) {
            bool changed = false;
            for (int ci : inst->priority_order()) {
                const auto& cust = inst->customers[ci];
                std::vector<int> paid;
                for (int aid : cust.choice_set)
                    if (aid != 0) paid.push_back(aid);
                if (paid.empty()) continue;

                // per-alternative options: withhold (cap only), or offer at
                // the bare price (no level) or at each feasible level
                using Opt = std::pair<bool, std::optional<int>>;
                std::vector<std::vector<Opt>> options;
                long combos = 1;
                for (int aid : paid) {
                    std::vector<Opt> o;
                    if (cap) o.emplace_back(false, std::nullopt);
                    o.emplace_back(true, std::nullopt);
                    for (int l : inst->feasible_levels(aid, cust.id)) o.emplace_back(true, l);
                    combos *= static_cast<long>(o.size());
                    options.push_back(std::move(o));
                }
                if (combos > 100000) continue;

                std::vector<std::size_t> pick(paid.size(), 0), best_pick;
                for (std::size_t a = 0; a < paid.size(); ++a) {
                    auto cur = plan.level_choice.find({paid[a], cust.id});
                    bool off = cap && !plan.offered(paid[a], cust.id);
                    std::optional<int> lvl =
                        cur != plan.level_choice.end() ? cur->second : std::nullopt;
                    for (std::size_t k = 0; k < options[a].size(); ++k)
                        if (options[a][k] == Opt{!off, off ? std::nullopt : lvl}) pick[a] = k;
                }
                best_pick = pick;
                std::fill(pick.begin(), pick.end(), 0);
                for (long c = 0; c < combos; ++c) {
                    for (std::size_t a = 0; a < paid.size(); ++a) {
                        const Opt& o = options[a][pick[a]];
                        plan.level_choice[{paid[a], cust.id}] = o.second;
                        if (cap) plan.offer[{paid[a], cust.id}] = o.first;
                    }
                    double v = value(plan);
                    if (v > best + 1e-12) {
                        best = v;
                        best_pick = pick;
                        changed = true;
                    }
                    for (std::size_t a = 0; a < paid.size(); ++a) {
                        if (++pick[a] < options[a].size()) break;
                        pick[a] = 0;
                    }
                }
                for (std::size_t a = 0; a < paid.size(); ++a) {
                    const Opt& o = options[a][best_pick[a]];
                    plan.level_choice[{paid[a], cust.id}] = o.second;
                    if (cap) plan.offer[{paid[a], cust.id}] = o.first;
                }
            }
            if (!changed) break;
        }
    }

    std::optional<std::pair<double, std::vector<double>>> operator()(
        const std::vector<double>& lp_x) const {
        const bool rum = model->kind == milp::ModelKind::Rum;
        const bool cap = model->kind == milp::ModelKind::RrmCap;

        // Round the node LP into a supplier plan: expected level per (i, n)
        // (none when the lambda mass is below 1/2) and offers from y_in.
        std::map<std::pair<int, int>, double> lam_mass, lam_level;
        oracle::SupplierPlan plan;
        for (const auto& v : model->variables) {
            const Tag& t = v.tag;
            double xv = lp_x[v.id];
            if (t.role == Tag::Role::Lambda) {
                lam_mass[{t.i, t.n}] += xv;
                lam_level[{t.i, t.n}] += xv * t.l;
            } else if (t.role == Tag::Role::YOffer && t.i != 0) {
                plan.offer[{t.i, t.n}] = xv >= 0.5;
            }
        }
        for (const auto& [key, mass] : lam_mass) {
            std::optional<int> pick;
            if (mass >= 0.5) {
                int want = static_cast<int>(std::lround(lam_level[key] / mass));
                auto levels = inst->feasible_levels(key.first, key.second);
                int best = levels.front();
                for (int l : levels)
                    if (std::abs(l - want) < std::abs(best - want)) best = l;
                pick = best;
            }
            plan.level_choice[key] = pick;
        }
        if (!cap)
            plan.offer.clear();

        improve(plan, rum, cap);

        auto outcome = oracle::simulate_choices(
            plan, *inst, *draws, *er, rum ? oracle::Behavior::Rum : oracle::Behavior::Rrm);

        // Lift the simulated outcome to a full assignment.
        const int R = inst->scenario_count;
        const int I = static_cast<int>(inst->alternatives.size());
        std::map<int, int> alt_pos, cust_pos;
        for (int p = 0; p < I; ++p) alt_pos[inst->alternatives[p].id] = p;
        for (std::size_t p = 0; p < inst->customers.size(); ++p)
            cust_pos[inst->customers[p].id] = static_cast<int>(p);
        const auto order = inst->priority_order();

        // availability trace per (alt id, cust id, r)
        std::map<std::tuple<int, int, int>, bool> avail;
        if (cap) {
            for (int r = 0; r < R; ++r) {
                std::vector<long> stock(I, std::numeric_limits<long>::max());
                for (int p = 0; p < I; ++p)
                    if (inst->alternatives[p].capacity) stock[p] = *inst->alternatives[p].capacity;
                for (int ci : order) {
                    const auto& cust = inst->customers[ci];
                    for (int aid : cust.choice_set)
                        avail[{aid, cust.id, r}] =
                            aid == 0 ||
                            (plan.offered(aid, cust.id) && stock[alt_pos[aid]] > 0);
                    const auto& ch = outcome.chosen.at({cust.id, r});
                    if (ch && *ch != 0) --stock[alt_pos[*ch]];
                }
            }
        }

        auto price_of = [&](int alt, int cust) { return plan.price(*inst, alt, cust); };
        auto is_avail = [&](int aid, int cust, int r) {
            if (!cap) return true;
            return avail.at({aid, cust, r});
        };

        std::vector<double> x(model->variables.size(), 0.0);
        for (const auto& v : model->variables) {
            const Tag& t = v.tag;
            double val = 0.0;
            switch (t.role) {
                case Tag::Role::W: {
                    const auto& ch = outcome.chosen.at({t.n, t.r});
                    val = (ch && *ch == t.i) ? 1.0 : 0.0;
                    break;
                }
                case Tag::Role::Lambda: {
                    auto it = plan.level_choice.find({t.i, t.n});
                    val = (it != plan.level_choice.end() && it->second &&
                           *it->second == t.l)
                              ? 1.0
                              : 0.0;
                    break;
                }
                case Tag::Role::Alpha: {
                    const auto& ch = outcome.chosen.at({t.n, t.r});
                    auto it = plan.level_choice.find({t.i, t.n});
                    val = (ch && *ch == t.i && it != plan.level_choice.end() && it->second &&
                           *it->second == t.l)
                              ? 1.0
                              : 0.0;
                    break;
                }
                case Tag::Role::YOffer:
                    val = plan.offered(t.i, t.n) ? 1.0 : 0.0;
                    break;
                case Tag::Role::YAvail:
                    val = is_avail(t.i, t.n, t.r) ? 1.0 : 0.0;
                    break;
                case Tag::Role::B:
                case Tag::Role::RR: {
                    const int np = cust_pos.at(t.n);
                    double ps = inst->customers[np].beta_price *
                                    (price_of(t.j, t.n) - price_of(t.i, t.n)) +
                                draws->vp(np, t.r);
                    if (t.role == Tag::Role::B)
                        val = ps >= draws->vo(np, t.r) ? 1.0 : 0.0;
                    else
                        val = std::max(draws->vo(np, t.r), ps);
                    break;
                }
                case Tag::Role::Z: {
                    const int np = cust_pos.at(t.n);
                    if (is_avail(t.j, t.n, t.r)) {
                        double ps = inst->customers[np].beta_price *
                                        (price_of(t.j, t.n) - price_of(t.i, t.n)) +
                                    draws->vp(np, t.r);
                        val = std::max(draws->vo(np, t.r), ps) +
                              er->at(alt_pos.at(t.i), alt_pos.at(t.j), np, t.r);
                    }
                    break;
                }
                case Tag::Role::RAlt: {
                    const int np = cust_pos.at(t.n);
                    const auto& cust = inst->customers[np];
                    double sum = 0.0;
                    for (int j : cust.choice_set) {
                        if (j == t.i) continue;
                        if (cap && !is_avail(j, t.n, t.r)) continue;
                        double ps = cust.beta_price * (price_of(j, t.n) - price_of(t.i, t.n)) +
                                    draws->vp(np, t.r);
                        sum += std::max(draws->vo(np, t.r), ps) +
                               er->at(alt_pos.at(t.i), alt_pos.at(j), np, t.r);
                    }
                    val = sum;
                    break;
                }
                case Tag::Role::RCust: {
                    const int np = cust_pos.at(t.n);
                    const auto& cust = inst->customers[np];
                    double best = std::numeric_limits<double>::infinity();
                    for (int i : cust.choice_set) {
                        if (!is_avail(i, t.n, t.r)) continue;
                        double sum = 0.0;
                        for (int j : cust.choice_set) {
                            if (j == i) continue;
                            if (cap && !is_avail(j, t.n, t.r)) continue;
                            double ps = cust.beta_price * (price_of(j, t.n) - price_of(i, t.n)) +
                                        draws->vp(np, t.r);
                            sum += std::max(draws->vo(np, t.r), ps) +
                                   er->at(alt_pos.at(i), alt_pos.at(j), np, t.r);
                        }
                        best = std::min(best, sum);
                    }
                    val = best;
                    break;
                }
                case Tag::Role::U: {
                    const int np = cust_pos.at(t.n);
                    val = inst->customers[np].beta_price * price_of(t.i, t.n) +
                          draws->util(alt_pos.at(t.i), np, t.r);
                    break;
                }
                case Tag::Role::UMax: {
                    const int np = cust_pos.at(t.n);
                    const auto& cust = inst->customers[np];
                    double best = -std::numeric_limits<double>::infinity();
                    for (int i : cust.choice_set)
                        best = std::max(best, cust.beta_price * price_of(i, t.n) +
                                                  draws->util(alt_pos.at(i), np, t.r));
                    val = best;
                    break;
                }
                case Tag::Role::Other:
                    break;
            }
            x[v.id] = val;
        }
        return std::make_pair(model->objective_value(x), std::move(x));
    }
};

}  // namespace

solver::HeuristicFn make_heuristic(const MilpModel& model, const Instance& inst,
                                   const ScenarioDraws& draws, const ERTable& er) {
    return Lifter{&model, &inst, &draws, &er};
}

}  // namespace rrm::builders
