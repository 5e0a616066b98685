#pragma once

#include <memory>
#include <vector>

#include "rrm/milp.hpp"

namespace rrm::solver {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;       // in the model's maximization sense
    std::vector<double> x;        // structural variables only
    /// Max-sense reduced costs of the structural variables (0 for basics);
    /// filled only when status == Optimal. Increasing a nonbasic-at-lower
    /// variable by t changes the objective by dj*t (dj <= 0 there).
    std::vector<double> dj;
    long iterations = 0;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bounded-variable primal simplex over a fixed constraint matrix.
/// The matrix is loaded once; variable bounds are supplied per solve so a
/// branch-and-bound search can tighten them without rebuilding.
class BoundedSimplex {
public:
    explicit BoundedSimplex(const milp::MilpModel& model);
    ~BoundedSimplex();
    BoundedSimplex(BoundedSimplex&&) noexcept;

    /// Bounds vectors cover the structural variables (model.variables order).
    /// With warm_start the basis from the previous solve is reused; only the
    /// bounds differ, so a short feasibility repair replaces the cold start.
    LpResult solve(const std::vector<double>& lb, const std::vector<double>& ub,
                   long iteration_limit = -1, bool warm_start = false);

    int n_structural() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// LP relaxation of the model at its own bounds (integrality dropped).
LpResult solve_lp(const milp::MilpModel& model);

}  // namespace rrm::solver
