#include <doctest.h>

#include "rrm/milp.hpp"

using namespace rrm::milp;

namespace {

Tag w_tag(int i, int n, int r) {
    Tag t;
    t.role = Tag::Role::W;
    t.i = i;
    t.n = n;
    t.r = r;
    return t;
}

Tag other_tag(std::string name) {
    Tag t;
    t.role = Tag::Role::Other;
    t.other_name = std::move(name);
    return t;
}

MilpModel tiny_model() {
    MilpModel m;
    m.kind = ModelKind::Generic;
    int w = m.add_var(VarKind::Binary, 0.0, 1.0, w_tag(1, 2, 0));
    Tag lam;
    lam.role = Tag::Role::Lambda;
    lam.i = 1;
    lam.n = 2;
    lam.l = 3;
    int la = m.add_var(VarKind::Binary, 0.0, 1.0, lam);
    int x = m.add_var(VarKind::Continuous, 0.0, 4.5, other_tag("price"));
    int f = m.add_var(VarKind::Continuous, -kInf, kInf, other_tag("free"));
    m.add_objective(w, 1.0);
    m.add_objective(x, 0.5);
    m.add_constraint({{{w, 1.0}, {la, 1.0}}, Sense::Le, 1.0, "pick"});
    m.add_constraint({{{x, 2.0}, {f, -1.0}}, Sense::Eq, 3.0, "link"});
    m.add_constraint({{{f, 1.0}}, Sense::Ge, -2.5, "floor"});
    return m;
}

}  // namespace

TEST_CASE("tag names round-trip through parse") {
    Tag w = w_tag(1, 7, 3);
    CHECK(w.name() == "w_1_7_3");
    auto back = Tag::parse("w_1_7_3");
    REQUIRE(back.has_value());
    CHECK(*back == w);

    Tag al;
    al.role = Tag::Role::Alpha;
    al.i = 2;
    al.n = 10;
    al.r = 0;
    al.l = 6;
    CHECK(al.name() == "al_2_10_0_6");
    CHECK(Tag::parse(al.name()) == al);

    CHECK(!Tag::parse("w_1_2").has_value());    // wrong arity
    CHECK(!Tag::parse("q_1_2_3").has_value());  // unknown prefix
    CHECK(!Tag::parse("w_1_x_3").has_value());  // non-numeric index
}

TEST_CASE("model counts") {
    auto m = tiny_model();
    auto c = model_counts(m);
    CHECK(c.n_vars == 4);
    CHECK(c.n_constraints == 3);
    CHECK(c.n_binaries == 2);
}

TEST_CASE("find locates tagged variables") {
    auto m = tiny_model();
    CHECK(m.find(w_tag(1, 2, 0)) == 0);
    CHECK(m.find(w_tag(9, 9, 9)) == -1);
    CHECK(m.find(other_tag("price")) == 2);
}

TEST_CASE("objective_value matches hand computation") {
    auto m = tiny_model();
    CHECK(m.objective_value({1.0, 0.0, 3.0, 0.0}) == doctest::Approx(2.5));
}

TEST_CASE("mps export/import round-trips the model") {
    auto m = tiny_model();
    std::string mps = export_mps(m);
    CHECK(mps.find("OBJSENSE") != std::string::npos);
    CHECK(mps.find(" MAX") != std::string::npos);
    CHECK(mps.find("ENDATA") != std::string::npos);

    MilpModel back = import_mps(mps);
    auto c0 = model_counts(m), c1 = model_counts(back);
    CHECK(c0 == c1);
    for (std::size_t k = 0; k < m.variables.size(); ++k) {
        CAPTURE(k);
        CHECK(back.variables[k].tag == m.variables[k].tag);
        CHECK(back.variables[k].kind == m.variables[k].kind);
        CHECK(back.variables[k].lower == m.variables[k].lower);
        CHECK(back.variables[k].upper == m.variables[k].upper);
    }
    for (std::size_t k = 0; k < m.constraints.size(); ++k) {
        CHECK(back.constraints[k].sense == m.constraints[k].sense);
        CHECK(back.constraints[k].rhs == m.constraints[k].rhs);
        CHECK(back.constraints[k].terms == m.constraints[k].terms);
    }
    CHECK(back.objective == m.objective);
    // export of the re-import is byte-identical
    CHECK(export_mps(back) == mps);
}

TEST_CASE("import flips a minimization objective to stored-max form") {
    std::string mps =
        "NAME t\n"
        "ROWS\n"
        " N obj\n"
        " L r1\n"
        "COLUMNS\n"
        "    x obj 2.0 r1 1.0\n"
        "RHS\n"
        "    rhs r1 5.0\n"
        "BOUNDS\n"
        "ENDATA\n";
    MilpModel m = import_mps(mps);
    REQUIRE(m.objective.size() == 1);
    CHECK(m.objective[0].second == -2.0);
}

TEST_CASE("import reports malformed input with line numbers") {
    CHECK_THROWS_AS(import_mps("GARBAGE\n"), MpsParseError);
    try {
        import_mps("NAME t\nROWS\n N obj\nCOLUMNS\n    x nosuchrow 1.0\nENDATA\n");
        FAIL("expected throw");
    } catch (const MpsParseError& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 5") != std::string::npos);
        CHECK(msg.find("nosuchrow") != std::string::npos);
    }
    CHECK_THROWS_WITH_AS(
        import_mps("NAME t\nROWS\n N obj\n L r1\nRANGES\n    rng r1 1.0\nENDATA\n"),
        doctest::Contains("RANGES"), MpsParseError);
}

TEST_CASE("integer markers produce binaries") {
    std::string mps =
        "NAME t\n"
        "OBJSENSE\n"
        " MAX\n"
        "ROWS\n"
        " N obj\n"
        " L r1\n"
        "COLUMNS\n"
        "    m1 'MARKER' 'INTORG'\n"
        "    w_1_0_0 obj 1.0 r1 1.0\n"
        "    m2 'MARKER' 'INTEND'\n"
        "    x obj 1.0 r1 1.0\n"
        "RHS\n"
        "    rhs r1 1.0\n"
        "ENDATA\n";
    MilpModel m = import_mps(mps);
    REQUIRE(m.variables.size() == 2);
    CHECK(m.variables[0].kind == VarKind::Binary);
    CHECK(m.variables[0].tag.role == Tag::Role::W);
    CHECK(m.variables[1].kind == VarKind::Continuous);
    CHECK(m.variables[1].lower == 0.0);
    CHECK(m.variables[1].upper == kInf);
}
