#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rrm::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Binary, Continuous };

/// Semantic role of a variable plus its index tuple. Unused indices stay -1.
struct Tag {
    enum class Role {
        YOffer,   // y_in      (i, n)
        YAvail,   // ya_inr    (i, n, r)
        RR,       // RR_ijnr   (i, j, n, r)
        RAlt,     // Ra_inr    (i, n, r)
        RCust,    // Rc_nr     (n, r)
        B,        // b_ijnr    (i, j, n, r)
        Z,        // z_ijnr    (i, j, n, r)
        W,        // w_inr     (i, n, r)
        Lambda,   // lam_inl   (i, n, l)
        Alpha,    // al_inrl   (i, n, r, l)
        U,        // u_inr     (i, n, r)
        UMax,     // umax_nr   (n, r)
        Other
    };

    Role role = Role::Other;
    int i = -1, j = -1, n = -1, r = -1, l = -1;
    std::string other_name;  // used when role == Other

    std::string name() const;
    static std::optional<Tag> parse(const std::string& name);

    bool operator==(const Tag&) const = default;
};

struct VarRef {
    int id = -1;
    VarKind kind = VarKind::Continuous;
    double lower = -kInf;
    double upper = kInf;
    int branch_priority = 0;  // higher classes branch first
    Tag tag;
};

enum class Sense { Le, Eq, Ge };

struct LinConstraint {
    std::vector<std::pair<int, double>> terms;  // (variable id, coefficient)
    Sense sense = Sense::Le;
    double rhs = 0.0;
    std::string label;
};

enum class ModelKind { RrmUncap, RrmCap, Rum, Generic };

struct ModelCounts {
    std::size_t n_vars = 0;
    std::size_t n_constraints = 0;
    std::size_t n_binaries = 0;

    bool operator==(const ModelCounts&) const = default;
};

/// Solver-agnostic MILP, always stored as a maximization problem.
struct MilpModel {
    std::vector<VarRef> variables;
    std::vector<LinConstraint> constraints;
    std::vector<std::pair<int, double>> objective;
    ModelKind kind = ModelKind::Generic;
    std::uint64_t instance_digest = 0;

    int add_var(VarKind kind, double lower, double upper, Tag tag);
    void add_constraint(LinConstraint c);
    void add_objective(int var, double coef) { objective.emplace_back(var, coef); }

    /// Id of the variable carrying `tag`, or -1.
    int find(const Tag& tag) const;
    double objective_value(const std::vector<double>& x) const;
};

struct SolveStats {
    long nodes = 0;
    long iterations = 0;
    double wall_seconds = 0.0;
    bool external = false;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, TimeLimit };

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> values;  // indexed by variable id; empty unless an incumbent exists
    SolveStats stats;
};

struct MpsParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ModelCounts model_counts(const MilpModel& model);

/// Free-format MPS with OBJSENSE MAX and binaries declared through BV bounds.
/// Deterministic: variables by id, constraints in insertion order.
std::string export_mps(const MilpModel& model);

/// Inverse of export_mps up to tag reconstruction from names.
MilpModel import_mps(const std::string& text);

}  // namespace rrm::milp
