#include <doctest.h>

#include "rrm/instance.hpp"

using namespace rrm::instance;

namespace {

bool has_code(const std::vector<Violation>& vs, const std::string& code) {
    for (const auto& v : vs)
        if (v.code == code) return true;
    return false;
}

}  // namespace

TEST_CASE("synth instance validates cleanly") {
    auto inst = synth_instance(10, std::nullopt, 42);
    CHECK(validate(inst).empty());
    CHECK(inst.customers.size() == 10);
    CHECK(inst.alternatives.size() == 3);
    CHECK(inst.scenario_count == 4);
    CHECK(inst.price.lp(1, 3) == doctest::Approx(1.0));
    CHECK(inst.price.mp(2, 3) == doctest::Approx(4.5));
    CHECK(inst.price.lp(0, 3) == 0.0);  // opt-out is free
    CHECK(inst.feasible_levels(1, 1) == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("synth instance with capacities") {
    auto inst = synth_instance(11, std::make_pair(5L, 5L), 7);
    CHECK(validate(inst).empty());
    REQUIRE(inst.alternative(1) != nullptr);
    CHECK(inst.alternative(1)->capacity == 5);
    CHECK(inst.alternative(2)->capacity == 5);
    CHECK(!inst.alternative(0)->capacity.has_value());
}

TEST_CASE("feasible levels prune beyond the price cap") {
    auto inst = synth_instance(2, std::nullopt, 1);
    inst.price.mp_override[{1, 1}] = 2.0;  // 1.0 + l*0.5 <= 2.0 -> l in {1, 2}
    CHECK(inst.feasible_levels(1, 1) == std::vector<int>{1, 2});
    CHECK(inst.feasible_levels(1, 2) == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
    CHECK(inst.feasible_levels(0, 1).empty());
}

TEST_CASE("validate flags structural defects") {
    auto inst = synth_instance(3, std::nullopt, 0);

    SUBCASE("missing opt-out") {
        inst.alternatives.erase(inst.alternatives.begin());
        CHECK(has_code(validate(inst), "missing-opt-out"));
    }
    SUBCASE("capacitated opt-out") {
        inst.alternatives[0].capacity = 2;
        CHECK(has_code(validate(inst), "opt-out-capacitated"));
    }
    SUBCASE("duplicate alternative id") {
        inst.alternatives.push_back(inst.alternatives[1]);
        CHECK(has_code(validate(inst), "duplicate-alternative"));
    }
    SUBCASE("priority ranks must be a permutation") {
        inst.customers[0].priority_rank = inst.customers[1].priority_rank;
        CHECK(has_code(validate(inst), "priority-not-permutation"));
    }
    SUBCASE("choice set must reference known alternatives") {
        inst.customers[0].choice_set.push_back(9);
        CHECK(has_code(validate(inst), "unknown-choice"));
    }
    SUBCASE("choice set must contain the opt-out") {
        inst.customers[0].choice_set = {1, 2};
        CHECK(has_code(validate(inst), "choice-set-missing-opt-out"));
    }
    SUBCASE("inverted price bounds") {
        inst.price.lp_override[{1, 2}] = 9.0;
        CHECK(has_code(validate(inst), "price-bounds-inverted"));
    }
    SUBCASE("bad scenario count") {
        inst.scenario_count = 0;
        CHECK(has_code(validate(inst), "bad-scenario-count"));
    }
}

TEST_CASE("save/load round-trip is byte-stable") {
    auto inst = synth_instance(4, std::make_pair(2L, 3L), 99);
    inst.alternatives[1].attributes["quality"] = 0.25;
    inst.customers[2].beta_attrs["quality"] = -0.5;
    inst.price.mp_override[{2, 1}] = 3.25;

    std::string text = save(inst);
    Instance back = load(text);
    CHECK(save(back) == text);
    CHECK(digest(back) == digest(inst));
}

TEST_CASE("digest is sensitive to content") {
    auto a = synth_instance(4, std::nullopt, 1);
    auto b = synth_instance(4, std::nullopt, 2);
    CHECK(digest(a) != digest(b));
    auto c = a;
    c.customers[0].beta_price = -1.5;
    CHECK(digest(c) != digest(a));
}

TEST_CASE("load reports missing fields by name") {
    CHECK_THROWS_AS(load("{\"customers\": []}"), ParseError);
    CHECK_THROWS_WITH_AS(load("not json"), doctest::Contains("invalid JSON"), ParseError);
    try {
        load("{\"alternatives\": [], \"customers\": []}");
        FAIL("expected throw");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("price") != std::string::npos);
    }
}

TEST_CASE("priority order follows ranks, not list order") {
    auto inst = synth_instance(3, std::nullopt, 0);
    inst.customers[0].priority_rank = 3;
    inst.customers[1].priority_rank = 1;
    inst.customers[2].priority_rank = 2;
    CHECK(inst.priority_order() == std::vector<int>{1, 2, 0});
}
