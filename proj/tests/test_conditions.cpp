#include <catch2/catch_amalgamated.hpp>

#include "handleplan/conditions.hpp"
#include "handleplan/oracle.hpp"

using namespace handleplan;

TEST_CASE("the sphere cannot reach two projective planes") {
    const Surface fa = parse_surface("S");
    const Surface fb = parse_surface("P + P");

    const Verdict class_m = check_class_m(fa, fb);
    CHECK(class_m.status == FeasibilityStatus::infeasible);
    CHECK_FALSE(class_m.passed());
    CHECK(class_m.first_failed() == "po_b_le_3pa");
    REQUIRE(class_m.checks.size() == 3);
    CHECK(class_m.checks[1].left == 2);
    CHECK(class_m.checks[1].right == 0);
    CHECK(class_m.checks[1].relation == "<=");

    const Verdict morse = check_morse(fa, fb);
    CHECK(morse.status == FeasibilityStatus::infeasible);
    CHECK(morse.first_failed() == "po_b_le_pa");
    CHECK(morse.checks[1].left == 2);
    CHECK(morse.checks[1].right == 0);
}

TEST_CASE("check names and order are stable") {
    const Verdict class_m = check_class_m(parse_surface("P"), parse_surface("3*P"));
    REQUIRE(class_m.checks.size() == 3);
    CHECK(class_m.checks[0].name == "parity");
    CHECK(class_m.checks[1].name == "po_b_le_3pa");
    CHECK(class_m.checks[2].name == "po_a_le_3pb");
    CHECK(class_m.status == FeasibilityStatus::passes_necessary);
    CHECK(class_m.first_failed().empty());
    CHECK(class_m.checks[1].left == 3);
    CHECK(class_m.checks[1].right == 3);

    const Verdict morse = check_morse(parse_surface("P"), parse_surface("3*P"));
    CHECK(morse.checks[0].name == "parity");
    CHECK(morse.checks[1].name == "po_b_le_pa");
    CHECK(morse.checks[2].name == "po_a_le_pb");
    CHECK(morse.status == FeasibilityStatus::infeasible);
}

TEST_CASE("worked verdicts") {
    CHECK(check_class_m(parse_surface("S"), parse_surface("S")).status ==
          FeasibilityStatus::passes_necessary);
    CHECK(check_morse(parse_surface("S"), parse_surface("S")).status ==
          FeasibilityStatus::feasible);
    CHECK(check_morse(parse_surface("T"), parse_surface("K")).status ==
          FeasibilityStatus::feasible);
    CHECK(check_morse(parse_surface("P"), parse_surface("P")).status ==
          FeasibilityStatus::feasible);
    CHECK(check_class_m(parse_surface("P"), parse_surface("S + K")).status ==
          FeasibilityStatus::infeasible);  // parity: P_o goes 1 -> 0
    CHECK(check_class_m(parse_surface("P"), parse_surface("S + K")).first_failed() == "parity");
}

TEST_CASE("empty surfaces are rejected") {
    CHECK_THROWS_AS(check_class_m(Surface{}, parse_surface("S")), std::invalid_argument);
    CHECK_THROWS_AS(check_class_m(parse_surface("S"), Surface{}), std::invalid_argument);
    CHECK_THROWS_AS(check_morse(Surface{}, Surface{}), std::invalid_argument);
}

TEST_CASE("checker status is symmetric under swapping the surfaces") {
    const auto universe = surface_universe(2, 3);
    for (const auto& fa : universe)
        for (const auto& fb : universe) {
            CHECK(check_class_m(fa, fb).status == check_class_m(fb, fa).status);
            CHECK(check_morse(fa, fb).status == check_morse(fb, fa).status);
        }
}

TEST_CASE("morse pass implies class-m pass, never feasible from class-m") {
    const auto universe = surface_universe(2, 3);
    for (const auto& fa : universe)
        for (const auto& fb : universe) {
            const Verdict class_m = check_class_m(fa, fb);
            const Verdict morse = check_morse(fa, fb);
            CHECK(class_m.status != FeasibilityStatus::feasible);
            CHECK(morse.status != FeasibilityStatus::passes_necessary);
            if (morse.passed()) CHECK(class_m.passed());
            CHECK(class_m.checks[0].holds == morse.checks[0].holds);
        }
}
