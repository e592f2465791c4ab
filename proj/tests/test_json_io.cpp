#include <catch2/catch_amalgamated.hpp>

#include "handleplan/json_io.hpp"

using namespace handleplan;

namespace {

Plan sample_plan() {
    Plan plan;
    plan.start = parse_surface("N2");
    plan.d4_moves = {D4Family{0}, D4Family{0}};
    plan.d2_moves = {
        TwoHandle{0, TwoHandleOutcome::separating_split(Component::projective_plane(),
                                                        Component::projective_plane())},
        TwoHandle{2, TwoHandleOutcome::compress(Component::sphere())}};
    plan.d1_moves = {OneHandle::merge(0, 1), OneHandle::self_plain(0),
                     OneHandle::self_twisted(1)};
    return plan;
}

}  // namespace

TEST_CASE("plan JSON round-trip") {
    const Plan plan = sample_plan();
    const nlohmann::json j = plan_to_json(plan);
    CHECK(j.at("start") == "K");
    CHECK(j.at("d4") == nlohmann::json::array({0, 0}));
    CHECK(plan_from_json(j) == plan);

    const Plan minimal = plan_from_json(nlohmann::json{{"start", "S + T"}});
    CHECK(minimal.start == parse_surface("S + T"));
    CHECK(minimal.total_moves() == 0);
}

TEST_CASE("plan JSON rejects unknown and malformed fields") {
    using nlohmann::json;
    CHECK_THROWS_AS(plan_from_json(json{{"start", "S"}, {"bogus", 1}}), schema_error);
    CHECK_THROWS_AS(plan_from_json(json{{"d4", json::array()}}), schema_error);
    CHECK_THROWS_AS(plan_from_json(json::array()), schema_error);
    CHECK_THROWS_AS(plan_from_json(json{{"start", "S"}, {"d4", 3}}), schema_error);
    CHECK_THROWS_AS(plan_from_json(json{{"start", "S"}, {"d4", json::array({"x"})}}),
                    schema_error);
    CHECK_THROWS_AS(
        plan_from_json(json{{"start", "S"},
                            {"d2", json::array({{{"component", 0}}})}}),
        schema_error);
    CHECK_THROWS_AS(
        plan_from_json(json{
            {"start", "S"},
            {"d2", json::array({{{"component", 0},
                                 {"outcome", {{"kind", "trivial"}, {"extra", 1}}}}})}}),
        schema_error);
    CHECK_THROWS_AS(
        plan_from_json(json{{"start", "S"},
                            {"d2", json::array({{{"component", 0},
                                                 {"outcome", {{"kind", "explode"}}}}})}}),
        schema_error);
    CHECK_THROWS_AS(
        plan_from_json(json{{"start", "S"},
                            {"d1", json::array({{{"kind", "merge"}, {"first", 0}}})}}),
        schema_error);
    CHECK_THROWS_AS(
        plan_from_json(json{{"start", "S"},
                            {"d1", json::array({{{"kind", "swap"}, {"component", 0}}})}}),
        schema_error);

    // Notation errors inside documents surface as parse errors.
    CHECK_THROWS_AS(plan_from_json(json{{"start", "N0"}}), parse_error);
}

TEST_CASE("budgets JSON round-trip") {
    const Budgets budgets{1, 2, 3};
    CHECK(budgets_from_json(budgets_to_json(budgets)) == budgets);
    CHECK_THROWS_AS(budgets_from_json(nlohmann::json{{"d4", 1}, {"d2", 2}}), schema_error);
    CHECK_THROWS_AS(
        budgets_from_json(nlohmann::json{{"d4", 1}, {"d2", 2}, {"d1", 3}, {"d0", 4}}),
        schema_error);
}

TEST_CASE("certificate JSON carries plan, trace, verdict and chain") {
    const PlanCertificate cert = construct_theorem2(parse_surface("K"), 2, 1);
    const nlohmann::json j = certificate_to_json(cert);

    CHECK(j.contains("plan"));
    CHECK(j.at("trace").at("final") == "P + P + K");
    CHECK(j.at("trace").at("surfaces").size() == 3);
    CHECK(j.at("verdict").at("status") == "passes_necessary");
    CHECK(j.at("theorem1_chain").at("three_p_start") == 6);
    CHECK(j.at("discrepancy") == false);
    CHECK(j.at("stated_target") == "P + P + K");

    const nlohmann::json deltas = j.at("trace").at("deltas");
    REQUIRE(deltas.size() == 2);
    CHECK(deltas[0] == nlohmann::json({{"p", 2}, {"p_odd", 0}, {"chi", 0}, {"components", 1}}));

    const PlanCertificate bare = make_certificate(Plan{parse_surface("S"), {}, {}, {}});
    CHECK_FALSE(certificate_to_json(bare).contains("stated_target"));
}

TEST_CASE("verdict and report serialization") {
    const nlohmann::json v = verdict_to_json(check_class_m(parse_surface("S"), parse_surface("P + P")));
    CHECK(v.at("status") == "infeasible");
    REQUIRE(v.at("checks").size() == 3);
    CHECK(v.at("checks")[1].at("name") == "po_b_le_3pa");
    CHECK(v.at("checks")[1].at("holds") == false);

    const nlohmann::json r = report_to_json(reachable_set(parse_surface("P"), Budgets{1, 1, 0}));
    CHECK(r.at("start") == "P");
    CHECK(r.at("plan_count") == 7);
    CHECK(r.at("reachable").size() == 5);
    CHECK(r.at("counterexamples").empty());
    CHECK(r.at("budgets") == nlohmann::json({{"d4", 1}, {"d2", 1}, {"d1", 0}}));

    SweepOptions options;
    options.max_components = 1;
    options.max_genus = 1;
    options.d2 = 1;
    options.d1 = 1;
    const nlohmann::json s = sweep_to_json(sweep_theorem1(options));
    CHECK(s.at("cases") == 3);
    CHECK(s.at("counterexamples").empty());
    CHECK(s.at("universe").at("max_genus") == 1);
    CHECK(s.at("budgets").at("d4").is_null());
}

TEST_CASE("verify accepts certificates and bare plans") {
    const PlanCertificate cert = construct_theorem2(parse_surface("K"), 2, 1);
    const nlohmann::json doc = certificate_to_json(cert);
    const VerifyResult ok = verify_document(doc);
    CHECK(ok.ok);
    CHECK(ok.message == "verified");
    CHECK(ok.recomputed.trace.final_surface == cert.trace.final_surface);
    CHECK(ok.recomputed.discrepancy == cert.discrepancy);

    const VerifyResult bare = verify_document(plan_to_json(cert.plan));
    CHECK(bare.ok);

    const PlanCertificate extended = construct_theorem2(parse_surface("K"), 2, 2);
    CHECK(verify_document(certificate_to_json(extended)).ok);
}

TEST_CASE("verify rejects tampered claims") {
    const PlanCertificate cert = construct_theorem2(parse_surface("K"), 2, 1);
    nlohmann::json doc = certificate_to_json(cert);

    SECTION("tampered final surface") {
        doc["trace"]["final"] = "S";
        const VerifyResult result = verify_document(doc);
        CHECK_FALSE(result.ok);
        CHECK(result.message.find("trace") != std::string::npos);
    }
    SECTION("tampered chain") {
        doc["theorem1_chain"]["three_p_start"] = 99;
        CHECK_FALSE(verify_document(doc).ok);
    }
    SECTION("tampered verdict") {
        doc["verdict"]["status"] = "feasible";
        CHECK_FALSE(verify_document(doc).ok);
    }
    SECTION("discrepancy flag must match the stated target") {
        doc["discrepancy"] = true;
        CHECK_FALSE(verify_document(doc).ok);
    }
    SECTION("discrepancy flag without a stated target") {
        doc.erase("stated_target");
        doc["discrepancy"] = true;
        CHECK_FALSE(verify_document(doc).ok);
    }
    SECTION("unknown top-level field") {
        doc["note"] = "tampered";
        CHECK_THROWS_AS(verify_document(doc), schema_error);
    }
}

TEST_CASE("verify reports invalid plans instead of throwing") {
    nlohmann::json doc;
    doc["start"] = "P";
    doc["d4"] = nlohmann::json::array({0, 0});
    const VerifyResult result = verify_document(doc);
    CHECK_FALSE(result.ok);
    CHECK(result.message.find("capacity") != std::string::npos);
}
