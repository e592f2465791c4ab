#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "handleplan/moves.hpp"
#include "support/test_oracles.hpp"

using namespace handleplan;

namespace {

MoveDelta measure(const Surface& before, const Surface& after) {
    return delta_between(before, after);
}

}  // namespace

TEST_CASE("d2 outcome menus match the independent filter") {
    for (const auto& c : test_oracle::component_pool(6)) {
        const auto expected = test_oracle::d2_outcomes_by_filter(c);
        const auto actual = enumerate_d2_outcomes(c);
        INFO("component " << format_component(c));
        CHECK(actual == expected);
    }
}

TEST_CASE("d2 outcome menus, pinned small cases") {
    CHECK(enumerate_d2_outcomes(Component::sphere()) ==
          std::vector<TwoHandleOutcome>{TwoHandleOutcome::trivial_split()});
    CHECK(enumerate_d2_outcomes(Component::projective_plane()) ==
          std::vector<TwoHandleOutcome>{TwoHandleOutcome::trivial_split()});

    const auto torus = enumerate_d2_outcomes(Component::torus());
    REQUIRE(torus.size() == 2);
    CHECK(torus[0] == TwoHandleOutcome::trivial_split());
    CHECK(torus[1] == TwoHandleOutcome::compress(Component::sphere()));

    const auto klein = enumerate_d2_outcomes(Component::klein_bottle());
    REQUIRE(klein.size() == 3);
    CHECK(klein[0] == TwoHandleOutcome::trivial_split());
    CHECK(klein[1] == TwoHandleOutcome::separating_split(Component::projective_plane(),
                                                         Component::projective_plane()));
    CHECK(klein[2] == TwoHandleOutcome::compress(Component::sphere()));

    const auto n4 = enumerate_d2_outcomes(Component::non_orientable(4));
    CHECK(std::find(n4.begin(), n4.end(),
                    TwoHandleOutcome::separating_split(Component::torus(),
                                                       Component::klein_bottle())) != n4.end());
    CHECK(std::find(n4.begin(), n4.end(), TwoHandleOutcome::compress(Component::torus())) !=
          n4.end());
}

TEST_CASE("split outcomes are unordered and sphere splits alias the trivial one") {
    CHECK(TwoHandleOutcome::separating_split(Component::torus(), Component::projective_plane()) ==
          TwoHandleOutcome::separating_split(Component::projective_plane(), Component::torus()));

    const auto aliased = TwoHandleOutcome::separating_split(Component::sphere(),
                                                            Component::klein_bottle());
    CHECK(aliased.normalized_for(Component::klein_bottle()) == TwoHandleOutcome::trivial_split());
    CHECK(aliased.normalized_for(Component::torus()) == aliased);
}

TEST_CASE("apply_d4 splits off a Klein bottle") {
    const Surface start = parse_surface("P + K");
    const Surface after = apply_d4(start, start.component(0));
    CHECK(after == parse_surface("P + K + K"));
    CHECK(measure(start, after) == MoveDelta{2, 0, 0, 1});
    CHECK_THROWS_AS(apply_d4(start, Component::torus()), move_error);
    try {
        apply_d4(start, Component::torus());
        FAIL("expected move_error");
    } catch (const move_error& e) {
        CHECK(e.code() == "target_orientable");
    }
}

TEST_CASE("apply_d2 semantics") {
    const Surface start = parse_surface("T + K");

    CHECK(apply_d2(start, 0, TwoHandleOutcome::trivial_split()) == parse_surface("S + T + K"));
    CHECK(apply_d2(start, 1,
                   TwoHandleOutcome::separating_split(Component::projective_plane(),
                                                      Component::projective_plane())) ==
          parse_surface("T + P + P"));
    CHECK(apply_d2(start, 1, TwoHandleOutcome::compress(Component::sphere())) ==
          parse_surface("S + T"));

    // A split naming the component itself plus a sphere is the trivial split.
    CHECK(apply_d2(start, 1,
                   TwoHandleOutcome::separating_split(Component::sphere(),
                                                      Component::klein_bottle())) ==
          parse_surface("S + T + K"));

    try {
        apply_d2(start, 0, TwoHandleOutcome::separating_split(Component::sphere(),
                                                              Component::klein_bottle()));
        FAIL("expected move_error");
    } catch (const move_error& e) {
        CHECK(e.code() == "outcome_not_enumerable");
    }
    try {
        apply_d2(start, 7, TwoHandleOutcome::trivial_split());
        FAIL("expected move_error");
    } catch (const move_error& e) {
        CHECK(e.code() == "index_out_of_range");
    }

    for (const auto& c : test_oracle::component_pool(5)) {
        const Surface one({c});
        for (const auto& outcome : enumerate_d2_outcomes(c)) {
            const Surface next = apply_d2(one, 0, outcome);
            CHECK(next.euler() == one.euler() + 2);
        }
    }
}

TEST_CASE("apply_d1 semantics") {
    const Surface start = parse_surface("T + K");

    CHECK(apply_d1(start, OneHandle::merge(0, 1)) == parse_surface("N4"));
    CHECK(apply_d1(start, OneHandle::merge(1, 0)) == parse_surface("N4"));
    CHECK(apply_d1(start, OneHandle::self_plain(0)) == parse_surface("O2 + K"));
    CHECK(apply_d1(start, OneHandle::self_plain(1)) == parse_surface("T + N4"));
    CHECK(apply_d1(start, OneHandle::self_twisted(0)) == parse_surface("N4 + K"));
    CHECK(apply_d1(start, OneHandle::self_twisted(1)) == parse_surface("T + N4"));

    try {
        apply_d1(start, OneHandle::merge(1, 1));
        FAIL("expected move_error");
    } catch (const move_error& e) {
        CHECK(e.code() == "merge_same_component");
    }
    try {
        apply_d1(start, OneHandle::self_plain(5));
        FAIL("expected move_error");
    } catch (const move_error& e) {
        CHECK(e.code() == "index_out_of_range");
    }
}

TEST_CASE("one handle merge stores sorted indices") {
    const OneHandle m = OneHandle::merge(3, 1);
    CHECK(m.first() == 1);
    CHECK(m.second() == 3);
}

TEST_CASE("validate_plan reports the first violation") {
    SECTION("empty plan passes") {
        const Plan plan{parse_surface("K"), {}, {}, {}};
        CHECK(validate_plan(plan).ok);
    }
    SECTION("capacity is per start component") {
        Plan plan{parse_surface("P"), {D4Family{0}, D4Family{0}}, {}, {}};
        const auto verdict = validate_plan(plan);
        REQUIRE_FALSE(verdict.ok);
        CHECK(verdict.code == "capacity_exceeded");
        CHECK(verdict.stage == MoveStage::d4);
        CHECK(verdict.move_index == 1);
        CHECK(verdict.message.find("capacity: 2 > P = 1") != std::string::npos);
    }
    SECTION("orientable d4 target") {
        Plan plan{parse_surface("S + P"), {D4Family{0}}, {}, {}};
        const auto verdict = validate_plan(plan);
        REQUIRE_FALSE(verdict.ok);
        CHECK(verdict.code == "target_orientable");
    }
    SECTION("d4 target out of range") {
        Plan plan{parse_surface("P"), {D4Family{2}}, {}, {}};
        CHECK(validate_plan(plan).code == "index_out_of_range");
    }
    SECTION("non-enumerable d2 outcome") {
        Plan plan{parse_surface("T"),
                  {},
                  {TwoHandle{0, TwoHandleOutcome::separating_split(
                                    Component::projective_plane(),
                                    Component::projective_plane())}},
                  {}};
        const auto verdict = validate_plan(plan);
        REQUIRE_FALSE(verdict.ok);
        CHECK(verdict.code == "outcome_not_enumerable");
        CHECK(verdict.stage == MoveStage::d2);
        CHECK(verdict.move_index == 0);
    }
    SECTION("apply_plan throws plan_error carrying the verdict") {
        Plan plan{parse_surface("P"), {D4Family{0}, D4Family{0}}, {}, {}};
        try {
            apply_plan(plan);
            FAIL("expected plan_error");
        } catch (const plan_error& e) {
            CHECK(e.verdict().code == "capacity_exceeded");
            CHECK(e.verdict().move_index == 1);
        }
    }
}

TEST_CASE("apply_plan produces a full trace with stage snapshots") {
    Plan plan;
    plan.start = parse_surface("N2");
    plan.d4_moves = {D4Family{0}, D4Family{0}};
    plan.d2_moves = {TwoHandle{0, TwoHandleOutcome::separating_split(
                                      Component::projective_plane(),
                                      Component::projective_plane())}};
    plan.d1_moves = {OneHandle::merge(0, 1)};

    const Trace trace = apply_plan(plan);
    REQUIRE(trace.surfaces.size() == 5);
    CHECK(trace.surfaces.front() == plan.start);
    CHECK(trace.after_d4 == parse_surface("K + K + K"));
    CHECK(trace.after_d2 == parse_surface("P + P + K + K"));
    CHECK(trace.final_surface == parse_surface("K + K + K"));
    CHECK(trace.surfaces.back() == trace.final_surface);
    REQUIRE(trace.deltas.size() == 4);

    MoveDelta total{};
    for (const auto& d : trace.deltas) {
        total.p += d.p;
        total.p_odd += d.p_odd;
        total.euler += d.euler;
        total.components += d.components;
    }
    CHECK(total == delta_between(plan.start, trace.final_surface));
}

TEST_CASE("random valid plans obey the per-move delta laws") {
    std::mt19937 rng(42);
    const auto pool = test_oracle::component_pool(4);
    std::uniform_int_distribution<std::size_t> pool_dist(0, pool.size() - 1);
    std::uniform_int_distribution<int> count_dist(1, 3);

    for (int trial = 0; trial < 400; ++trial) {
        std::vector<Component> parts;
        const int n = count_dist(rng);
        for (int i = 0; i < n; ++i) parts.push_back(pool[pool_dist(rng)]);
        Surface current(parts);
        const Surface start = current;

        std::vector<int> used(start.component_count(), 0);
        int stage = 0;
        for (int step = 0; step < 6; ++step) {
            std::uniform_int_distribution<int> stage_dist(stage, 2);
            const int pick = stage_dist(rng);
            if (pick == 0) {
                std::vector<int> eligible;
                for (std::size_t i = 0; i < start.component_count(); ++i)
                    if (used[i] < start.component(i).p()) eligible.push_back(static_cast<int>(i));
                if (eligible.empty()) continue;
                const int target = eligible[std::uniform_int_distribution<std::size_t>(
                    0, eligible.size() - 1)(rng)];
                ++used[static_cast<std::size_t>(target)];
                const Surface next =
                    apply_d4(current, start.component(static_cast<std::size_t>(target)));
                const MoveDelta d = measure(current, next);
                CHECK(d == MoveDelta{2, 0, 0, 1});
                current = next;
            } else if (pick == 1) {
                stage = 1;
                const int ci = std::uniform_int_distribution<int>(
                    0, static_cast<int>(current.component_count()) - 1)(rng);
                const auto menu =
                    enumerate_d2_outcomes(current.component(static_cast<std::size_t>(ci)));
                const auto& outcome =
                    menu[std::uniform_int_distribution<std::size_t>(0, menu.size() - 1)(rng)];
                const Surface next = apply_d2(current, ci, outcome);
                const MoveDelta d = measure(current, next);
                CHECK(d.euler == 2);
                CHECK(d.p <= 0);
                CHECK(d.p % 2 == 0);
                CHECK(d.p_odd % 2 == 0);
                current = next;
            } else {
                stage = 2;
                const int n_comp = static_cast<int>(current.component_count());
                std::uniform_int_distribution<int> kind_dist(0, n_comp > 1 ? 2 : 1);
                const int kind = kind_dist(rng);
                OneHandle move = OneHandle::self_plain(0);
                if (kind == 2) {
                    const int i = std::uniform_int_distribution<int>(0, n_comp - 1)(rng);
                    int j = std::uniform_int_distribution<int>(0, n_comp - 2)(rng);
                    if (j >= i) ++j;
                    move = OneHandle::merge(i, j);
                } else {
                    const int i = std::uniform_int_distribution<int>(0, n_comp - 1)(rng);
                    move = kind == 0 ? OneHandle::self_plain(i) : OneHandle::self_twisted(i);
                }
                const Surface next = apply_d1(current, move);
                const MoveDelta d = measure(current, next);
                CHECK(d.euler == -2);
                CHECK((d.p_odd == 0 || d.p_odd == -2));
                current = next;
            }
        }
        CHECK((current.euler() - start.euler()) % 2 == 0);
    }
}

TEST_CASE("manifold connectivity") {
    SECTION("connected start stays connected") {
        Plan plan{parse_surface("K"), {D4Family{0}}, {TwoHandle{0, TwoHandleOutcome::trivial_split()}}, {}};
        CHECK(manifold_connected(plan) == Connectivity::connected);
    }
    SECTION("two pieces with no merge are provably disconnected") {
        Plan plan{parse_surface("S + S"), {}, {}, {}};
        CHECK(manifold_connected(plan) == Connectivity::disconnected);
    }
    SECTION("a merge joins the two pieces") {
        Plan plan{parse_surface("S + S"), {}, {}, {OneHandle::merge(0, 1)}};
        CHECK(manifold_connected(plan) == Connectivity::connected);
    }
    SECTION("partial merging is reported unknown, not sharpened") {
        Plan plan{parse_surface("S + S + S"), {}, {}, {OneHandle::merge(0, 1)}};
        CHECK(manifold_connected(plan) == Connectivity::unknown);
    }
    SECTION("self moves never join pieces") {
        Plan plan{parse_surface("S + S"), {}, {}, {OneHandle::self_plain(0)}};
        CHECK(manifold_connected(plan) == Connectivity::disconnected);
    }
    SECTION("invalid plans are rejected") {
        Plan plan{parse_surface("S + S"), {D4Family{0}}, {}, {}};
        CHECK_THROWS_AS(manifold_connected(plan), plan_error);
    }
}

TEST_CASE("plan comparisons and move counting") {
    Plan a{parse_surface("P"), {D4Family{0}}, {}, {}};
    Plan b = a;
    CHECK(a == b);
    b.d2_moves.push_back(TwoHandle{0, TwoHandleOutcome::trivial_split()});
    CHECK(a != b);
    CHECK(b.total_moves() == 2);
}
