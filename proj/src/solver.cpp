#include "rrm/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

namespace rrm::solver {

using milp::kInf;
using milp::MilpModel;
using milp::Solution;
using milp::SolveStatus;
using milp::VarKind;

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kTieTol = 1e-9;

double wall_now() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct Node {
    long id = 0;
    int depth = 0;
    double bound = kInf;  // parent LP objective (maximization)
    std::vector<double> lb, ub;
};

struct NodeOrderCmp {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
        return a.id > b.id;                                // older first on ties
    }
};

// Feasibility of a candidate incumbent against the full model.
bool is_feasible(const MilpModel& model, const std::vector<double>& x) {
    if (x.size() != model.variables.size()) return false;
    for (const auto& v : model.variables) {
        double xv = x[v.id];
        if (xv < v.lower - kIntTol || xv > v.upper + kIntTol) return false;
        if (v.kind == VarKind::Binary && std::fabs(xv - std::round(xv)) > kIntTol) return false;
    }
    for (const auto& c : model.constraints) {
        double lhs = 0.0;
        for (auto [id, coef] : c.terms) lhs += coef * x[id];
        double tol = kIntTol * (1.0 + std::fabs(c.rhs));
        switch (c.sense) {
            case milp::Sense::Le:
                if (lhs > c.rhs + tol) return false;
                break;
            case milp::Sense::Ge:
                if (lhs < c.rhs - tol) return false;
                break;
            case milp::Sense::Eq:
                if (std::fabs(lhs - c.rhs) > tol) return false;
                break;
        }
    }
    return true;
}

// Lexicographic comparison of rounded binary vectors (variable-id order).
bool binaries_lex_less(const MilpModel& model, const std::vector<double>& a,
                       const std::vector<double>& b) {
    for (const auto& v : model.variables) {
        if (v.kind != VarKind::Binary) continue;
        long ra = std::lround(a[v.id]), rb = std::lround(b[v.id]);
        if (ra != rb) return ra < rb;
    }
    return false;
}

}  // namespace

Solution solve(const MilpModel& model, const SolveOptions& opts, const HeuristicFn& heuristic) {
    if (opts.time_limit_s <= 0.0 || opts.abs_gap < 0.0 || opts.rel_gap < 0.0 ||
        opts.threads < 1)
        throw std::invalid_argument("solve: limits must be positive");

    const double t_start = wall_now();
    const int n = static_cast<int>(model.variables.size());

    std::vector<int> binary_ids;
    std::vector<double> root_lb(n), root_ub(n);
    for (const auto& v : model.variables) {
        root_lb[v.id] = v.lower;
        root_ub[v.id] = v.upper;
        if (v.kind == VarKind::Binary) binary_ids.push_back(v.id);
    }

    BoundedSimplex lp(model);
    bool solved_once = false;

    Solution out;
    out.status = SolveStatus::Infeasible;
    bool have_incumbent = false;
    double inc_obj = -kInf;
    std::vector<double> inc_x;

    auto offer_incumbent = [&](double obj, const std::vector<double>& x) {
        if (!is_feasible(model, x)) return;
        double exact = model.objective_value(x);
        if (!have_incumbent || exact > inc_obj + kTieTol) {
            have_incumbent = true;
            inc_obj = exact;
            inc_x = x;
            for (int id : binary_ids) inc_x[id] = std::round(inc_x[id]);
        } else if (exact > inc_obj - kTieTol && binaries_lex_less(model, x, inc_x)) {
            inc_x = x;
            for (int id : binary_ids) inc_x[id] = std::round(inc_x[id]);
        }
        (void)obj;
    };

    // Pseudo-cost state: average objective degradation per unit of fraction.
    std::vector<double> pc_up_sum(n, 0.0), pc_dn_sum(n, 0.0);
    std::vector<long> pc_up_cnt(n, 0), pc_dn_cnt(n, 0);

    long node_counter = 0;
    long total_iterations = 0;

    std::priority_queue<Node, std::vector<Node>, NodeOrderCmp> heap;
    std::vector<Node> stack;
    auto push_node = [&](Node&& nd) {
        if (opts.node_order == SolveOptions::NodeOrder::DepthFirst)
            stack.push_back(std::move(nd));
        else
            heap.push(std::move(nd));
    };
    auto pop_node = [&]() {
        if (opts.node_order == SolveOptions::NodeOrder::DepthFirst) {
            Node nd = std::move(stack.back());
            stack.pop_back();
            return nd;
        }
        Node nd = heap.top();
        heap.pop();
        return nd;
    };
    auto queue_empty = [&] {
        return opts.node_order == SolveOptions::NodeOrder::DepthFirst ? stack.empty()
                                                                      : heap.empty();
    };

    Node root;
    root.id = node_counter++;
    root.bound = kInf;
    root.lb = root_lb;
    root.ub = root_ub;
    push_node(std::move(root));

    bool timed_out = false;
    bool root_unbounded = false;

    auto gap_closed = [&](double bound) {
        if (!have_incumbent) return false;
        double gap = bound - inc_obj;
        return gap <= opts.abs_gap || gap <= opts.rel_gap * std::max(1.0, std::fabs(inc_obj));
    };

    while (!queue_empty()) {
        if (wall_now() - t_start > opts.time_limit_s) {
            timed_out = true;
            break;
        }
        if (opts.node_limit >= 0 && node_counter > opts.node_limit) {
            timed_out = true;
            break;
        }
        Node nd = pop_node();
        if (gap_closed(nd.bound)) continue;

        LpResult rel = lp.solve(nd.lb, nd.ub, -1, solved_once);
        solved_once = true;
        total_iterations += rel.iterations;
        if (rel.status == LpStatus::Infeasible) continue;
        if (rel.status == LpStatus::Unbounded) {
            if (nd.depth == 0) root_unbounded = true;
            break;
        }
        if (rel.status == LpStatus::IterLimit) {
            timed_out = true;
            break;
        }
        if (gap_closed(rel.objective)) continue;

        // Reduced-cost fixing: a nonbasic binary whose forced move to the
        // opposite bound would drop the LP bound into the pruned region can be
        // fixed for this whole subtree (children inherit nd's bounds).
        if (have_incumbent && !rel.dj.empty()) {
            for (int id : binary_ids) {
                double range = nd.ub[id] - nd.lb[id];
                if (range <= kIntTol) continue;
                double dj = rel.dj[id];
                if (dj < 0.0 && rel.x[id] <= nd.lb[id] + kIntTol) {
                    if (gap_closed(rel.objective + dj * range)) nd.ub[id] = nd.lb[id];
                } else if (dj > 0.0 && rel.x[id] >= nd.ub[id] - kIntTol) {
                    if (gap_closed(rel.objective - dj * range)) nd.lb[id] = nd.ub[id];
                }
            }
        }

        // Most fractional / pseudo-cost candidate selection.
        int branch_var = -1;
        double best_score = -1.0;
        for (int id : binary_ids) {
            double f = rel.x[id] - std::floor(rel.x[id]);
            double frac = std::min(f, 1.0 - f);
            if (frac <= kIntTol) continue;
            double score;
            if (opts.branch_rule == SolveOptions::BranchRule::PseudoCost &&
                pc_up_cnt[id] > 0 && pc_dn_cnt[id] > 0) {
                double up = pc_up_sum[id] / pc_up_cnt[id];
                double dn = pc_dn_sum[id] / pc_dn_cnt[id];
                score = std::max(up * (1.0 - f), 1e-8) * std::max(dn * f, 1e-8);
            } else {
                score = frac;
            }
            if (score > best_score) {
                best_score = score;
                branch_var = id;
            }
        }

        if (branch_var < 0) {
            // Integral point: candidate incumbent.
            std::vector<double> x = rel.x;
            for (int id : binary_ids) x[id] = std::round(x[id]);
            offer_incumbent(rel.objective, x);
        }
        // The rounding heuristic costs a full feasibility check, so run it on
        // the root, then periodically.
        if (heuristic && (nd.depth == 0 || node_counter % 64 == 0)) {
            if (auto h = heuristic(rel.x)) offer_incumbent(h->first, h->second);
        }
        if (branch_var < 0) continue;
        if (gap_closed(rel.objective)) continue;

        double f = rel.x[branch_var] - std::floor(rel.x[branch_var]);
        // Down child (var = 0) first so depth-first dives deterministically.
        Node down;
        down.id = node_counter++;
        down.depth = nd.depth + 1;
        down.bound = rel.objective;
        down.lb = nd.lb;
        down.ub = nd.ub;
        down.ub[branch_var] = 0.0;
        Node up = down;
        up.id = node_counter++;
        up.lb = nd.lb;
        up.ub = nd.ub;
        up.lb[branch_var] = 1.0;

        // Update pseudo-costs from quick child LP bounds when using that rule.
        if (opts.branch_rule == SolveOptions::BranchRule::PseudoCost) {
            LpResult rd = lp.solve(down.lb, down.ub, -1, true);
            LpResult ru = lp.solve(up.lb, up.ub, -1, true);
            total_iterations += rd.iterations + ru.iterations;
            if (rd.status == LpStatus::Optimal && f > kIntTol) {
                pc_dn_sum[branch_var] += (rel.objective - rd.objective) / f;
                ++pc_dn_cnt[branch_var];
                down.bound = rd.objective;
            }
            if (ru.status == LpStatus::Optimal && 1.0 - f > kIntTol) {
                pc_up_sum[branch_var] += (rel.objective - ru.objective) / (1.0 - f);
                ++pc_up_cnt[branch_var];
                up.bound = ru.objective;
            }
            if (rd.status == LpStatus::Infeasible) down.bound = -kInf;
            if (ru.status == LpStatus::Infeasible) up.bound = -kInf;
        }

        if (opts.node_order == SolveOptions::NodeOrder::DepthFirst) {
            // stack: push up first so down is explored first
            if (up.bound > -kInf) push_node(std::move(up));
            if (down.bound > -kInf) push_node(std::move(down));
        } else {
            if (down.bound > -kInf) push_node(std::move(down));
            if (up.bound > -kInf) push_node(std::move(up));
        }
    }

    out.stats.nodes = node_counter;
    out.stats.iterations = total_iterations;
    out.stats.wall_seconds = wall_now() - t_start;
    out.stats.external = false;

    if (root_unbounded && !have_incumbent) {
        out.status = SolveStatus::Unbounded;
        return out;
    }
    if (have_incumbent) {
        out.status = timed_out ? SolveStatus::TimeLimit : SolveStatus::Optimal;
        out.objective = inc_obj;
        out.values = std::move(inc_x);
    } else {
        out.status = timed_out ? SolveStatus::TimeLimit : SolveStatus::Infeasible;
    }
    return out;
}

// ---- external solver adapter ----

Solution parse_solution_text(const MilpModel& model, const std::string& text,
                             ExternalSolverConfig::Dialect dialect) {
    std::map<std::string, int> id_of;
    for (const auto& v : model.variables) id_of[v.tag.name()] = v.id;

    Solution out;
    out.values.assign(model.variables.size(), 0.0);
    out.stats.external = true;

    std::optional<double> declared_obj;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool any_pair = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string name;
        if (!(ls >> name)) continue;
        if (name[0] == '#' || name[0] == '*') continue;
        std::string value_tok;
        if (!(ls >> value_tok))
            throw SolutionParseError("solution line " + std::to_string(lineno) +
                                     ": expected '<name> <value>'");
        char* end = nullptr;
        double value = std::strtod(value_tok.c_str(), &end);
        if (end != value_tok.c_str() + value_tok.size())
            throw SolutionParseError("solution line " + std::to_string(lineno) +
                                     ": bad value '" + value_tok + "'");
        if (name == "objective") {
            if (dialect == ExternalSolverConfig::Dialect::Pairs)
                throw SolutionParseError("solution line " + std::to_string(lineno) +
                                         ": objective line not allowed in pairs dialect");
            declared_obj = value;
            continue;
        }
        auto it = id_of.find(name);
        if (it == id_of.end())
            throw SolutionParseError("solution line " + std::to_string(lineno) +
                                     ": unknown variable '" + name + "'");
        out.values[it->second] = value;
        any_pair = true;
    }
    if (dialect == ExternalSolverConfig::Dialect::ObjectivePairs && !declared_obj)
        throw SolutionParseError("solution file lacks the required 'objective' line");
    if (!any_pair && !declared_obj)
        throw SolutionParseError("solution file contains no recognizable content");

    out.objective = declared_obj ? *declared_obj : model.objective_value(out.values);
    out.status = SolveStatus::Optimal;
    return out;
}

namespace {

std::string substitute(std::string tmpl, const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = tmpl.find(key, pos)) != std::string::npos) {
        tmpl.replace(pos, key.size(), value);
        pos += value.size();
    }
    return tmpl;
}

}  // namespace

Solution solve_external(const MilpModel& model, const ExternalSolverConfig& config,
                        const SolveOptions& opts) {
    if (config.command.empty()) throw SpawnError("external solver command is empty");
    (void)opts;

    char mps_path[] = "/tmp/rrm_model_XXXXXX";
    char sol_path[] = "/tmp/rrm_sol_XXXXXX";
    int mps_fd = mkstemp(mps_path);
    int sol_fd = mkstemp(sol_path);
    if (mps_fd < 0 || sol_fd < 0) throw SpawnError("could not create temporary files");
    close(mps_fd);
    close(sol_fd);

    struct Cleanup {
        const char *a, *b;
        ~Cleanup() {
            std::remove(a);
            std::remove(b);
        }
    } cleanup{mps_path, sol_path};

    {
        std::ofstream out(mps_path);
        out << milp::export_mps(model);
        if (!out) throw SpawnError("could not write MPS file");
    }

    const double t_start = std::chrono::duration<double>(
                               std::chrono::steady_clock::now().time_since_epoch())
                               .count();
    std::string cmd = substitute(substitute(config.command, "{mps}", mps_path), "{sol}", sol_path);
    int rc = std::system(cmd.c_str());
    if (rc == -1) throw SpawnError("could not spawn external solver: " + cmd);
    int exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    if (exit_code == 127 || exit_code == 126)
        throw SpawnError("external solver command not runnable: " + cmd);
    if (exit_code != 0)
        throw ExternalExitError("external solver exited with status " +
                                std::to_string(exit_code) + ": " + cmd);

    std::ifstream in(sol_path);
    std::ostringstream body;
    body << in.rdbuf();
    Solution out = parse_solution_text(model, body.str(), config.dialect);
    out.stats.wall_seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now().time_since_epoch())
                                 .count() -
                             t_start;
    return out;
}

int threads_from_env(int fallback) {
    const char* env = std::getenv("RL_THREADS");
    if (!env) return fallback;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) return fallback;
    return static_cast<int>(v);
}

}  // namespace rrm::solver
