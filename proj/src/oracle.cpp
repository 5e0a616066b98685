#include "rrm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rrm::oracle {

using builders::PricingOutcome;
using instance::Instance;
using stochastic::ERTable;
using stochastic::ScenarioDraws;

namespace {

constexpr double kTieTol = 1e-9;
constexpr double kMaxPlans = 1e7;

}  // namespace

double SupplierPlan::price(const Instance& inst, int alt, int cust) const {
    if (alt == 0) return 0.0;
    double p = inst.price.lp(alt, cust);
    auto it = level_choice.find({alt, cust});
    if (it != level_choice.end() && it->second) p += *it->second * inst.price.pm;
    return p;
}

bool SupplierPlan::offered(int alt, int cust) const {
    if (alt == 0) return true;
    auto it = offer.find({alt, cust});
    return it == offer.end() ? true : it->second;
}

PricingOutcome simulate_choices(const SupplierPlan& plan, const Instance& inst,
                                const ScenarioDraws& draws, const ERTable& er,
                                Behavior behavior) {
    PricingOutcome out;
    const int I = static_cast<int>(inst.alternatives.size());
    const int R = inst.scenario_count;

    std::map<int, int> alt_pos, cust_pos;
    for (int p = 0; p < I; ++p) alt_pos[inst.alternatives[p].id] = p;
    for (std::size_t p = 0; p < inst.customers.size(); ++p)
        cust_pos[inst.customers[p].id] = static_cast<int>(p);

    for (const auto& c : inst.customers) {
        for (int aid : c.choice_set) {
            if (aid == 0) continue;
            out.price[{aid, c.id}] = plan.price(inst, aid, c.id);
            out.offered[{aid, c.id}] = plan.offered(aid, c.id);
        }
    }

    const auto order = inst.priority_order();
    double total = 0.0;
    for (int r = 0; r < R; ++r) {
        std::vector<long> stock(I, std::numeric_limits<long>::max());
        for (int p = 0; p < I; ++p)
            if (inst.alternatives[p].capacity) stock[p] = *inst.alternatives[p].capacity;

        double revenue = 0.0;
        for (int ci : order) {
            const auto& cust = inst.customers[ci];
            const int n = cust_pos[cust.id];

            std::vector<int> avail;  // alternative ids
            std::vector<double> avail_price;
            for (int aid : cust.choice_set) {
                int p = alt_pos[aid];
                if (aid != 0 && (!plan.offered(aid, cust.id) || stock[p] <= 0)) continue;
                avail.push_back(aid);
                avail_price.push_back(plan.price(inst, aid, cust.id));
            }

            int best = -1;
            double best_score = 0.0, best_price = 0.0;
            for (std::size_t a = 0; a < avail.size(); ++a) {
                const int i = avail[a];
                double score;
                if (behavior == Behavior::Rrm) {
                    double regret = 0.0;
                    for (std::size_t bq = 0; bq < avail.size(); ++bq) {
                        if (bq == a) continue;
                        const int j = avail[bq];
                        regret += std::max(draws.vo(n, r),
                                           cust.beta_price * (avail_price[bq] - avail_price[a]) +
                                               draws.vp(n, r)) +
                                  er.at(alt_pos[i], alt_pos[j], n, r);
                    }
                    score = -regret;  // argmin as argmax of the negation
                } else {
                    score = cust.beta_price * avail_price[a] + draws.util(alt_pos[i], n, r);
                }
                bool better = best < 0 || score > best_score + kTieTol;
                if (!better && score > best_score - kTieTol) {
                    // tie: higher revenue, then higher alternative id
                    better = avail_price[a] > best_price + kTieTol ||
                             (avail_price[a] > best_price - kTieTol && i > best);
                }
                if (better) {
                    best = i;
                    best_score = score;
                    best_price = avail_price[a];
                }
            }

            out.chosen[{cust.id, r}] = best;
            if (best > 0) {
                revenue += best_price;
                --stock[alt_pos[best]];
            }
        }
        out.revenue_per_scenario[r] = revenue;
        total += revenue;
    }
    out.avg_revenue = total / R;
    return out;
}

OracleResult oracle_optimize(const Instance& inst, const ScenarioDraws& draws,
                             const ERTable& er, Mode mode, Behavior behavior) {
    // Plan slots in lexicographic order: level slots (alt asc, customer asc),
    // then offer slots (cap mode only). Level options: none, then ascending.
    struct Slot {
        int alt, cust;
        bool is_offer;
        std::vector<std::optional<int>> levels;  // level slots only
    };
    std::vector<Slot> slots;
    for (const auto& a : inst.alternatives) {
        if (a.id == 0) continue;
        for (const auto& c : inst.customers) {
            Slot s{a.id, c.id, false, {std::nullopt}};
            for (int l : inst.feasible_levels(a.id, c.id)) s.levels.push_back(l);
            slots.push_back(std::move(s));
        }
    }
    if (mode == Mode::Cap) {
        for (const auto& a : inst.alternatives) {
            if (a.id == 0) continue;
            for (const auto& c : inst.customers) slots.push_back({a.id, c.id, true, {}});
        }
    }

    double cardinality = 1.0;
    for (const auto& s : slots) cardinality *= s.is_offer ? 2.0 : double(s.levels.size());
    if (cardinality > kMaxPlans)
        throw SearchSpaceTooLarge("oracle search space has " +
                                  std::to_string(cardinality) + " plans (limit 1e7)");

    std::vector<std::size_t> idx(slots.size(), 0);
    auto option_count = [&](std::size_t k) {
        return slots[k].is_offer ? std::size_t(2) : slots[k].levels.size();
    };

    OracleResult best;
    best.avg_revenue = -1.0;
    bool done = slots.empty();
    SupplierPlan plan;
    for (;;) {
        // materialize the plan at the current odometer position
        for (std::size_t k = 0; k < slots.size(); ++k) {
            const Slot& s = slots[k];
            if (s.is_offer)
                plan.offer[{s.alt, s.cust}] = idx[k] == 0;  // option 0 = offered
            else
                plan.level_choice[{s.alt, s.cust}] = s.levels[idx[k]];
        }
        auto outcome = simulate_choices(plan, inst, draws, er, behavior);
        if (outcome.avg_revenue > best.avg_revenue + kTieTol) {
            best.avg_revenue = outcome.avg_revenue;
            best.plan = plan;
        }
        if (done) break;
        // advance odometer (last slot fastest)
        std::size_t k = slots.size();
        while (k > 0) {
            --k;
            if (++idx[k] < option_count(k)) break;
            idx[k] = 0;
            if (k == 0) done = true;
        }
        if (done) break;
    }
    return best;
}

}  // namespace rrm::oracle
