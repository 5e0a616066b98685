#include "rrm/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace rrm::solver {

using milp::kInf;

namespace {

constexpr double kFeasTol = 1e-7;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-8;
constexpr double kDropTol = 1e-12;
constexpr int kRefactorEvery = 100;

enum class VStat : unsigned char { Basic, AtLower, AtUpper, FreeNB };

}  // namespace

struct BoundedSimplex::Impl {
    int n_struct = 0;  // structural variables
    int m = 0;         // rows
    int n_total = 0;   // structural + slacks

    // CSC storage for structural columns; slack j (>= n_struct) is e_{j-n_struct}.
    std::vector<int> col_start;
    std::vector<int> row_idx;
    std::vector<double> val;

    std::vector<double> rhs;
    std::vector<double> cost;      // minimization costs (negated objective)
    std::vector<double> lb, ub;    // all variables including slacks

    // solver state
    std::vector<int> basis;        // basic variable of each row
    std::vector<int> row_of;       // row of a basic variable, -1 otherwise
    std::vector<VStat> stat;
    std::vector<double> x;

    // mutable: Eigen declares SparseLU::adjoint() non-const
    mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    bool lu_ok = false;

    struct Eta {
        int row;
        double pivot;
        std::vector<std::pair<int, double>> entries;  // off-pivot nonzeros
    };
    std::vector<Eta> etas;

    long iterations = 0;

    // scratch
    Eigen::VectorXd work, work2;

    void append_column_dot(int j, const Eigen::VectorXd& y, double& out) const {
        if (j >= n_struct) {
            out = y[j - n_struct];
            return;
        }
        double s = 0.0;
        for (int k = col_start[j]; k < col_start[j + 1]; ++k) s += val[k] * y[row_idx[k]];
        out = s;
    }

    void scatter_column(int j, Eigen::VectorXd& out) const {
        out.setZero();
        if (j >= n_struct) {
            out[j - n_struct] = 1.0;
            return;
        }
        for (int k = col_start[j]; k < col_start[j + 1]; ++k) out[row_idx[k]] = val[k];
    }

    void refactorize() {
        std::vector<Eigen::Triplet<double>> trips;
        for (int r = 0; r < m; ++r) {
            int j = basis[r];
            if (j >= n_struct) {
                trips.emplace_back(j - n_struct, r, 1.0);
            } else {
                for (int k = col_start[j]; k < col_start[j + 1]; ++k)
                    trips.emplace_back(row_idx[k], r, val[k]);
            }
        }
        Eigen::SparseMatrix<double> B(m, m);
        B.setFromTriplets(trips.begin(), trips.end());
        lu.compute(B);
        if (lu.info() != Eigen::Success)
            throw NumericError("simplex: basis factorization failed (singular basis)");
        lu_ok = true;
        etas.clear();
    }

    // y := B^{-1} y
    void ftran(Eigen::VectorXd& y) const {
        y = lu.solve(y);
        for (const auto& e : etas) {
            double yr = y[e.row] / e.pivot;
            if (yr != 0.0) {
                for (const auto& [i, w] : e.entries) y[i] -= w * yr;
            }
            y[e.row] = yr;
        }
    }

    // y := B^{-T} y
    void btran(Eigen::VectorXd& y) const {
        for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
            double s = y[it->row];
            for (const auto& [i, w] : it->entries) s -= w * y[i];
            y[it->row] = s / it->pivot;
        }
        y = lu.adjoint().solve(y);
    }

    void push_eta(int row, const Eigen::VectorXd& w) {
        Eta e;
        e.row = row;
        e.pivot = w[row];
        for (int i = 0; i < m; ++i)
            if (i != row && std::fabs(w[i]) > kDropTol) e.entries.emplace_back(i, w[i]);
        etas.push_back(std::move(e));
    }

    double bound_value(int j) const {
        switch (stat[j]) {
            case VStat::AtLower: return lb[j];
            case VStat::AtUpper: return ub[j];
            default: return 0.0;
        }
    }

    // Recompute basic values from nonbasic bound values.
    void recompute_x() {
        Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(rhs.data(), m);
        for (int j = 0; j < n_total; ++j) {
            if (stat[j] == VStat::Basic) continue;
            double xj = bound_value(j);
            x[j] = xj;
            if (xj == 0.0) continue;
            if (j >= n_struct) {
                r[j - n_struct] -= xj;
            } else {
                for (int k = col_start[j]; k < col_start[j + 1]; ++k)
                    r[row_idx[k]] -= val[k] * xj;
            }
        }
        ftran(r);
        for (int i = 0; i < m; ++i) x[basis[i]] = r[i];
    }

    double infeasibility() const {
        double phi = 0.0;
        for (int i = 0; i < m; ++i) {
            int j = basis[i];
            if (x[j] < lb[j]) phi += lb[j] - x[j];
            if (x[j] > ub[j]) phi += x[j] - ub[j];
        }
        return phi;
    }

    // One simplex iteration against fixed infeasibility signs `sigma` (phase 1)
    // or the true costs (phase 2, sigma null). sigma stays fixed across an
    // entire phase-1 epoch so Bland's rule retains its anti-cycling guarantee.
    // Returns: 0 = pivoted/flipped, 1 = no entering candidate, 2 = unbounded
    int iterate(const signed char* sigma, bool bland) {
        const bool phase1 = sigma != nullptr;
        Eigen::VectorXd& y = work;
        y.resize(m);
        if (phase1) {
            for (int i = 0; i < m; ++i) y[i] = static_cast<double>(sigma[basis[i]]);
        } else {
            for (int i = 0; i < m; ++i) y[i] = cost[basis[i]];
        }
        btran(y);

        // Pricing: pick the entering variable and direction.
        int enter = -1;
        double enter_dir = 0.0;
        double best_score = bland ? 0.0 : kDualTol;
        for (int j = 0; j < n_total; ++j) {
            if (stat[j] == VStat::Basic) continue;
            if (ub[j] <= lb[j]) continue;  // fixed: zero-length flips cycle forever
            double d;
            append_column_dot(j, y, d);
            if (!phase1) d = cost[j] - d;  // reduced cost
            else d = -d;                   // gradient of infeasibility wrt x_j
            double score = 0.0;
            double dir = 0.0;
            if (stat[j] == VStat::AtLower || stat[j] == VStat::FreeNB) {
                if (d < -kDualTol) {
                    score = -d;
                    dir = 1.0;
                }
            }
            if (dir == 0.0 && (stat[j] == VStat::AtUpper || stat[j] == VStat::FreeNB)) {
                if (d > kDualTol) {
                    score = d;
                    dir = -1.0;
                }
            }
            if (dir == 0.0) continue;
            if (bland) {
                enter = j;
                enter_dir = dir;
                break;
            }
            if (score > best_score) {
                best_score = score;
                enter = j;
                enter_dir = dir;
            }
        }
        if (enter < 0) return 1;

        // FTRAN the entering column.
        Eigen::VectorXd& w = work2;
        w.resize(m);
        scatter_column(enter, w);
        ftran(w);

        // Ratio test. x_B(t) = x_B - dir * w * t, entering moves by dir * t.
        double t_best = kInf;
        int leave_row = -1;
        double leave_bound = 0.0;
        double best_pivot = 0.0;
        for (int i = 0; i < m; ++i) {
            double wt = enter_dir * w[i];
            if (std::fabs(wt) < kPivotTol) continue;
            int j = basis[i];
            int sv = phase1 ? sigma[j] : 0;
            double t = kInf, bnd = 0.0;
            if (wt > 0.0) {  // basic decreases
                if (sv > 0) {  // above its upper bound, moving toward it
                    t = (x[j] - ub[j]) / wt;
                    bnd = ub[j];
                } else if (sv < 0) {
                    continue;  // below its lower bound, moving further down
                } else {
                    if (lb[j] == -kInf) continue;
                    t = (x[j] - lb[j]) / wt;
                    bnd = lb[j];
                }
            } else {  // basic increases
                if (sv < 0) {  // below its lower bound, moving toward it
                    t = (lb[j] - x[j]) / (-wt);
                    bnd = lb[j];
                } else if (sv > 0) {
                    continue;
                } else {
                    if (ub[j] == kInf) continue;
                    t = (ub[j] - x[j]) / (-wt);
                    bnd = ub[j];
                }
            }
            t = std::max(t, 0.0);
            if (t < t_best - 1e-12 ||
                (t < t_best + 1e-12 &&
                 (bland ? j < (leave_row >= 0 ? basis[leave_row] : n_total)
                        : std::fabs(wt) > best_pivot))) {
                t_best = t;
                leave_row = i;
                leave_bound = bnd;
                best_pivot = std::fabs(wt);
            }
        }
        // Entering variable's own opposite bound.
        double range = ub[enter] - lb[enter];
        bool flip = false;
        if (range < t_best) {
            t_best = range;
            flip = true;
        }
        if (t_best == kInf) return phase1 ? 1 : 2;  // phase 1 stall counts as no progress

        // Apply the step.
        if (t_best > 0.0) {
            for (int i = 0; i < m; ++i) x[basis[i]] -= enter_dir * w[i] * t_best;
        }
        double enter_val = (stat[enter] == VStat::AtUpper ? ub[enter]
                            : stat[enter] == VStat::AtLower ? lb[enter]
                                                            : 0.0) +
                           enter_dir * t_best;
        if (flip) {
            x[enter] = enter_val;
            stat[enter] = enter_dir > 0 ? VStat::AtUpper : VStat::AtLower;
        } else {
            int leave = basis[leave_row];
            x[leave] = leave_bound;
            stat[leave] = leave_bound == lb[leave] ? VStat::AtLower : VStat::AtUpper;
            if (lb[leave] == -kInf && ub[leave] == kInf) stat[leave] = VStat::FreeNB;
            row_of[leave] = -1;
            basis[leave_row] = enter;
            row_of[enter] = leave_row;
            stat[enter] = VStat::Basic;
            x[enter] = enter_val;
            push_eta(leave_row, w);
            if (static_cast<int>(etas.size()) >= kRefactorEvery) {
                refactorize();
                recompute_x();
            }
        }
        ++iterations;
        return 0;
    }

    // Composite phase 1 in epochs: sigma is frozen on the currently violated
    // set so Bland's rule keeps its termination guarantee, and the ratio test
    // never lets a feasible basic turn infeasible, so the violated set only
    // shrinks. Returns 0 = feasible, 1 = infeasible, 2 = iteration limit.
    int run_phase1(long iteration_limit) {
        std::vector<signed char> sigma(n_total, 0);
        std::vector<int> viol;
        while (true) {
            std::fill(sigma.begin(), sigma.end(), 0);
            viol.clear();
            for (int i = 0; i < m; ++i) {
                int j = basis[i];
                if (x[j] < lb[j] - kFeasTol) {
                    sigma[j] = -1;
                    viol.push_back(j);
                } else if (x[j] > ub[j] + kFeasTol) {
                    sigma[j] = 1;
                    viol.push_back(j);
                }
            }
            if (viol.empty()) return 0;
            long stall = 0;
            double best_aux = kInf;
            while (true) {
                if (iterations >= iteration_limit) return 2;
                double aux = 0.0;
                for (int i = 0; i < m; ++i) aux += sigma[basis[i]] * x[basis[i]];
                if (aux < best_aux - 1e-10) {
                    best_aux = aux;
                    stall = 0;
                } else {
                    ++stall;
                }
                bool bland = stall > 2L * (m + n_struct);
                if (iterate(sigma.data(), bland) != 0) return 1;  // sigma-optimal, still violated
                bool epoch_done = false;
                for (int j : viol) {
                    bool still = stat[j] == VStat::Basic &&
                                 (sigma[j] < 0 ? x[j] < lb[j] - kFeasTol : x[j] > ub[j] + kFeasTol);
                    if (!still) {
                        epoch_done = true;
                        break;
                    }
                }
                if (epoch_done) break;
            }
        }
    }
};

BoundedSimplex::BoundedSimplex(const milp::MilpModel& model) : impl_(new Impl) {
    Impl& s = *impl_;
    s.n_struct = static_cast<int>(model.variables.size());
    s.m = static_cast<int>(model.constraints.size());
    s.n_total = s.n_struct + s.m;

    // Build CSC from the row-wise constraints.
    std::vector<std::vector<std::pair<int, double>>> cols(s.n_struct);
    s.rhs.resize(s.m);
    s.lb.assign(s.n_total, 0.0);
    s.ub.assign(s.n_total, 0.0);
    for (int r = 0; r < s.m; ++r) {
        const auto& c = model.constraints[r];
        s.rhs[r] = c.rhs;
        for (auto [id, coef] : c.terms) cols[id].emplace_back(r, coef);
        int slack = s.n_struct + r;
        switch (c.sense) {
            case milp::Sense::Le: s.lb[slack] = 0.0; s.ub[slack] = kInf; break;
            case milp::Sense::Ge: s.lb[slack] = -kInf; s.ub[slack] = 0.0; break;
            case milp::Sense::Eq: s.lb[slack] = 0.0; s.ub[slack] = 0.0; break;
        }
    }
    s.col_start.resize(s.n_struct + 1, 0);
    for (int j = 0; j < s.n_struct; ++j)
        s.col_start[j + 1] = s.col_start[j] + static_cast<int>(cols[j].size());
    s.row_idx.resize(s.col_start.back());
    s.val.resize(s.col_start.back());
    for (int j = 0; j < s.n_struct; ++j) {
        int k = s.col_start[j];
        for (auto [r, v] : cols[j]) {
            s.row_idx[k] = r;
            s.val[k] = v;
            ++k;
        }
    }

    s.cost.assign(s.n_total, 0.0);
    for (auto [id, coef] : model.objective) s.cost[id] -= coef;  // minimize -obj
}

BoundedSimplex::~BoundedSimplex() = default;
BoundedSimplex::BoundedSimplex(BoundedSimplex&&) noexcept = default;

int BoundedSimplex::n_structural() const { return impl_->n_struct; }

LpResult BoundedSimplex::solve(const std::vector<double>& lb, const std::vector<double>& ub,
                               long iteration_limit, bool warm_start) {
    Impl& s = *impl_;
    for (int j = 0; j < s.n_struct; ++j) {
        s.lb[j] = lb[j];
        s.ub[j] = ub[j];
    }
    if (iteration_limit < 0) iteration_limit = 20000 + 40L * (s.m + s.n_struct);

    if (warm_start && static_cast<int>(s.basis.size()) == s.m) {
        // Keep the basis (bound-independent); re-anchor nonbasics whose bound
        // classification no longer fits the new bounds.
        for (int j = 0; j < s.n_struct; ++j) {
            if (s.stat[j] == VStat::Basic) continue;
            if (s.stat[j] == VStat::AtLower && s.lb[j] == -kInf)
                s.stat[j] = s.ub[j] != kInf ? VStat::AtUpper : VStat::FreeNB;
            else if (s.stat[j] == VStat::AtUpper && s.ub[j] == kInf)
                s.stat[j] = s.lb[j] != -kInf ? VStat::AtLower : VStat::FreeNB;
            else if (s.stat[j] == VStat::FreeNB && (s.lb[j] != -kInf || s.ub[j] != kInf))
                s.stat[j] = s.lb[j] != -kInf ? VStat::AtLower : VStat::AtUpper;
        }
        // basis unchanged since the last solve: factorization and etas stay valid
        if (!s.lu_ok) s.refactorize();
    } else {
        // Cold start from the all-slack basis.
        s.basis.resize(s.m);
        s.row_of.assign(s.n_total, -1);
        s.stat.assign(s.n_total, VStat::AtLower);
        s.x.assign(s.n_total, 0.0);
        for (int j = 0; j < s.n_struct; ++j) {
            if (s.lb[j] != -kInf) {
                s.stat[j] = VStat::AtLower;
            } else if (s.ub[j] != kInf) {
                s.stat[j] = VStat::AtUpper;
            } else {
                s.stat[j] = VStat::FreeNB;
            }
        }
        for (int r = 0; r < s.m; ++r) {
            int slack = s.n_struct + r;
            s.basis[r] = slack;
            s.row_of[slack] = r;
            s.stat[slack] = VStat::Basic;
        }
        s.refactorize();
    }
    s.recompute_x();
    s.iterations = 0;

    LpResult out;
    auto finish = [&](LpStatus st) {
        out.status = st;
        out.iterations = s.iterations;
        out.x.assign(s.x.begin(), s.x.begin() + s.n_struct);
        double obj = 0.0;
        for (int j = 0; j < s.n_total; ++j) obj += s.cost[j] * s.x[j];
        out.objective = -obj;
        return out;
    };

    // Phase 1: drive out primal infeasibility.
    switch (s.run_phase1(iteration_limit)) {
        case 1: return finish(LpStatus::Infeasible);
        case 2: return finish(LpStatus::IterLimit);
        default: break;
    }

    // Phase 2: optimize.
    {
        long stall = 0;
        double best_obj = kInf;
        while (true) {
            if (s.iterations >= iteration_limit) return finish(LpStatus::IterLimit);
            double cur = 0.0;
            for (int i = 0; i < s.m; ++i) cur += s.cost[s.basis[i]] * s.x[s.basis[i]];
            if (cur < best_obj - 1e-10) {
                best_obj = cur;
                stall = 0;
            } else {
                ++stall;
            }
            bool bland = stall > 2L * (s.m + s.n_struct);
            int rc = s.iterate(nullptr, bland);
            if (rc == 1) break;
            if (rc == 2) return finish(LpStatus::Unbounded);
            // Phase 2 can lose feasibility through drift; fall back to phase 1.
            if ((s.iterations & 0x3ff) == 0 && s.infeasibility() > kFeasTol * (1 + s.m)) {
                switch (s.run_phase1(iteration_limit)) {
                    case 1: return finish(LpStatus::Infeasible);
                    case 2: return finish(LpStatus::IterLimit);
                    default: break;
                }
            }
        }
    }
    s.refactorize();
    s.recompute_x();
    finish(LpStatus::Optimal);
    // Max-sense reduced costs at the optimum (used for bound tightening).
    {
        Eigen::VectorXd y(s.m);
        for (int i = 0; i < s.m; ++i) y[i] = s.cost[s.basis[i]];
        s.btran(y);
        out.dj.assign(s.n_struct, 0.0);
        for (int j = 0; j < s.n_struct; ++j) {
            if (s.stat[j] == VStat::Basic) continue;
            double d;
            s.append_column_dot(j, y, d);
            out.dj[j] = -(s.cost[j] - d);
        }
    }
    return out;
}

LpResult solve_lp(const milp::MilpModel& model) {
    for (const auto& c : model.constraints)
        for (auto [id, coef] : c.terms)
            if (!std::isfinite(coef))
                throw NumericError("solve_lp: non-finite coefficient in row " + c.label);
    BoundedSimplex simplex(model);
    std::vector<double> lb, ub;
    lb.reserve(model.variables.size());
    ub.reserve(model.variables.size());
    for (const auto& v : model.variables) {
        if (v.lower > v.upper)
            throw NumericError("solve_lp: inconsistent bounds on " + v.tag.name());
        lb.push_back(v.lower);
        ub.push_back(v.upper);
    }
    return simplex.solve(lb, ub);
}

}  // namespace rrm::solver
