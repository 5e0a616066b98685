#include <doctest.h>

#include <cstdint>
#include <random>

#include "rrm/milp.hpp"
#include "rrm/simplex.hpp"

using namespace rrm::milp;
using namespace rrm::solver;

namespace {

Tag named(const std::string& n) {
    Tag t;
    t.role = Tag::Role::Other;
    t.other_name = n;
    return t;
}

}  // namespace

TEST_CASE("max x+y subject to x+y <= 1") {
    MilpModel m;
    int x = m.add_var(VarKind::Continuous, 0.0, kInf, named("x"));
    int y = m.add_var(VarKind::Continuous, 0.0, kInf, named("y"));
    m.add_objective(x, 1.0);
    m.add_objective(y, 1.0);
    m.add_constraint({{{x, 1.0}, {y, 1.0}}, Sense::Le, 1.0, "cap"});
    auto res = solve_lp(m);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.x[0] + res.x[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fractional knapsack relaxation: max 3a+4b, 2a+3b <= 4, binaries relaxed") {
    MilpModel m;
    int a = m.add_var(VarKind::Binary, 0.0, 1.0, named("a"));
    int b = m.add_var(VarKind::Binary, 0.0, 1.0, named("b"));
    m.add_objective(a, 3.0);
    m.add_objective(b, 4.0);
    m.add_constraint({{{a, 2.0}, {b, 3.0}}, Sense::Le, 4.0, "k"});
    auto res = solve_lp(m);
    REQUIRE(res.status == LpStatus::Optimal);
    // a = 1, b = 2/3 -> 3 + 8/3
    CHECK(res.objective == doctest::Approx(3.0 + 8.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("infeasible bounds through rows") {
    MilpModel m;
    int x = m.add_var(VarKind::Continuous, 0.0, kInf, named("x"));
    m.add_objective(x, 1.0);
    m.add_constraint({{{x, 1.0}}, Sense::Ge, 2.0, "lo"});
    m.add_constraint({{{x, 1.0}}, Sense::Le, 1.0, "hi"});
    auto res = solve_lp(m);
    CHECK(res.status == LpStatus::Infeasible);
}

TEST_CASE("unbounded direction is detected") {
    MilpModel m;
    int x = m.add_var(VarKind::Continuous, 0.0, kInf, named("x"));
    int y = m.add_var(VarKind::Continuous, 0.0, kInf, named("y"));
    m.add_objective(x, 1.0);
    m.add_constraint({{{x, 1.0}, {y, -1.0}}, Sense::Le, 1.0, "r"});
    auto res = solve_lp(m);
    CHECK(res.status == LpStatus::Unbounded);
}

TEST_CASE("equality rows and free variables") {
    // max x - y  s.t.  x + y = 2, x - y = 0  ->  x = y = 1, obj 0
    MilpModel m;
    int x = m.add_var(VarKind::Continuous, -kInf, kInf, named("x"));
    int y = m.add_var(VarKind::Continuous, -kInf, kInf, named("y"));
    m.add_objective(x, 1.0);
    m.add_objective(y, -1.0);
    m.add_constraint({{{x, 1.0}, {y, 1.0}}, Sense::Eq, 2.0, "sum"});
    m.add_constraint({{{x, 1.0}, {y, -1.0}}, Sense::Eq, 0.0, "diff"});
    auto res = solve_lp(m);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.objective == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(res.x[0] == doctest::Approx(1.0));
    CHECK(res.x[1] == doctest::Approx(1.0));
}

TEST_CASE("negative lower bounds and upper-bounded variables") {
    // max -x + 2y  s.t.  x >= -3 (bound), y <= 5 (bound), x + y >= 0
    MilpModel m;
    int x = m.add_var(VarKind::Continuous, -3.0, kInf, named("x"));
    int y = m.add_var(VarKind::Continuous, -kInf, 5.0, named("y"));
    m.add_objective(x, -1.0);
    m.add_objective(y, 2.0);
    m.add_constraint({{{x, 1.0}, {y, 1.0}}, Sense::Ge, 0.0, "pos"});
    auto res = solve_lp(m);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.objective == doctest::Approx(13.0).epsilon(1e-9));  // x=-3, y=5
}

TEST_CASE("per-call bound tightening without rebuilding") {
    MilpModel m;
    int x = m.add_var(VarKind::Continuous, 0.0, 1.0, named("x"));
    int y = m.add_var(VarKind::Continuous, 0.0, 1.0, named("y"));
    m.add_objective(x, 1.0);
    m.add_objective(y, 1.0);
    m.add_constraint({{{x, 1.0}, {y, 1.0}}, Sense::Le, 1.5, "cap"});

    BoundedSimplex s(m);
    auto r1 = s.solve({0.0, 0.0}, {1.0, 1.0});
    REQUIRE(r1.status == LpStatus::Optimal);
    CHECK(r1.objective == doctest::Approx(1.5).epsilon(1e-9));

    // branch x = 0
    auto r2 = s.solve({0.0, 0.0}, {0.0, 1.0});
    REQUIRE(r2.status == LpStatus::Optimal);
    CHECK(r2.objective == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r2.x[0] == doctest::Approx(0.0));

    // branch x = 1
    auto r3 = s.solve({1.0, 0.0}, {1.0, 1.0});
    REQUIRE(r3.status == LpStatus::Optimal);
    CHECK(r3.objective == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("degenerate ties do not cycle") {
    // Classic highly degenerate cube-like LP; just require termination + optimum.
    MilpModel m;
    std::vector<int> v;
    for (int k = 0; k < 4; ++k)
        v.push_back(m.add_var(VarKind::Continuous, 0.0, kInf, named("x" + std::to_string(k))));
    m.add_objective(v[0], 0.75);
    m.add_objective(v[1], -150.0);
    m.add_objective(v[2], 0.02);
    m.add_objective(v[3], -6.0);
    m.add_constraint({{{v[0], 0.25}, {v[1], -60.0}, {v[2], -0.04}, {v[3], 9.0}}, Sense::Le, 0.0, "r1"});
    m.add_constraint({{{v[0], 0.5}, {v[1], -90.0}, {v[2], -0.02}, {v[3], 3.0}}, Sense::Le, 0.0, "r2"});
    m.add_constraint({{{v[2], 1.0}}, Sense::Le, 1.0, "r3"});
    auto res = solve_lp(m);  // Beale's cycling example
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.objective == doctest::Approx(0.05).epsilon(1e-7));
}

TEST_CASE("random dense LPs agree with a reference bound") {
    // max c'x, Ax <= b with A, c >= 0 and x in [0, u]: optimum is at most c'u and
    // at least the best single-variable solution. Also verify primal feasibility.
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(0.1, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 8, rows = 6;
        MilpModel m;
        std::vector<int> ids;
        std::vector<double> c(n), u(n);
        for (int j = 0; j < n; ++j) {
            u[j] = unif(rng);
            c[j] = unif(rng);
            ids.push_back(m.add_var(VarKind::Continuous, 0.0, u[j], named("x" + std::to_string(j))));
            m.add_objective(ids[j], c[j]);
        }
        std::vector<std::vector<double>> A(rows, std::vector<double>(n));
        std::vector<double> b(rows);
        for (int i = 0; i < rows; ++i) {
            LinConstraint row;
            for (int j = 0; j < n; ++j) {
                A[i][j] = unif(rng);
                row.terms.emplace_back(ids[j], A[i][j]);
            }
            b[i] = unif(rng);
            row.sense = Sense::Le;
            row.rhs = b[i];
            row.label = "r" + std::to_string(i);
            m.add_constraint(std::move(row));
        }
        auto res = solve_lp(m);
        REQUIRE(res.status == LpStatus::Optimal);
        // feasibility
        for (int i = 0; i < rows; ++i) {
            double lhs = 0.0;
            for (int j = 0; j < n; ++j) lhs += A[i][j] * res.x[j];
            CHECK(lhs <= b[i] + 1e-7);
        }
        for (int j = 0; j < n; ++j) {
            CHECK(res.x[j] >= -1e-9);
            CHECK(res.x[j] <= u[j] + 1e-9);
        }
        // weak bounds
        double upper = 0.0;
        for (int j = 0; j < n; ++j) upper += c[j] * u[j];
        CHECK(res.objective <= upper + 1e-7);
        double single_best = 0.0;
        for (int j = 0; j < n; ++j) {
            double x_max = u[j];
            for (int i = 0; i < rows; ++i) x_max = std::min(x_max, b[i] / A[i][j]);
            single_best = std::max(single_best, c[j] * x_max);
        }
        CHECK(res.objective >= single_best - 1e-7);
    }
}

TEST_CASE("lp duality check on random problems via complementary slackness proxy") {
    // For max c'x, Ax <= b, 0 <= x <= u the optimum must dominate any feasible
    // point produced by a greedy heuristic.
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 6, rows = 4;
        MilpModel m;
        std::vector<double> c(n), u(n, 1.0), b(rows);
        std::vector<std::vector<double>> A(rows, std::vector<double>(n));
        for (int j = 0; j < n; ++j) {
            c[j] = unif(rng);
            m.add_var(VarKind::Continuous, 0.0, 1.0, named("x" + std::to_string(j)));
            m.add_objective(j, c[j]);
        }
        for (int i = 0; i < rows; ++i) {
            LinConstraint row;
            for (int j = 0; j < n; ++j) {
                A[i][j] = unif(rng);
                row.terms.emplace_back(j, A[i][j]);
            }
            b[i] = 1.0 + unif(rng);
            row.sense = Sense::Le;
            row.rhs = b[i];
            m.add_constraint(std::move(row));
        }
        auto res = solve_lp(m);
        REQUIRE(res.status == LpStatus::Optimal);
        // greedy feasible point: scale the all-u vector into the feasible region
        double worst = 1.0;
        for (int i = 0; i < rows; ++i) {
            double lhs = 0.0;
            for (int j = 0; j < n; ++j) lhs += A[i][j];
            worst = std::min(worst, b[i] / lhs);
        }
        double greedy = 0.0;
        for (int j = 0; j < n; ++j) greedy += c[j] * worst;
        CHECK(res.objective >= greedy - 1e-7);
    }
}
