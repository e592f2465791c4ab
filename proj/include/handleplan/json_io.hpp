#pragma once

/**
 * @file json_io.hpp
 * @brief JSON schemas for plans, certificates, reports and verdicts.
 *
 * Field names are fixed and unknown fields are rejected, so a typo in a
 * hand-written plan file fails loudly instead of being ignored. Surfaces and
 * components travel as notation strings.
 */

#include <initializer_list>
#include <string>

#include "json.hpp"

#include "handleplan/conditions.hpp"
#include "handleplan/moves.hpp"
#include "handleplan/oracle.hpp"
#include "handleplan/planner.hpp"
#include "handleplan/surface.hpp"

namespace handleplan {

/// JSON document violates a schema (missing, unknown or mistyped field).
class schema_error : public error {
public:
    explicit schema_error(const std::string& message) : error(message) {}
};

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::string& context,
                         std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {}) {
    if (!obj.is_object()) throw schema_error(context + " must be a JSON object");
    for (const char* key : required)
        if (!obj.contains(key))
            throw schema_error(context + " is missing required field \"" + key + "\"");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : required) known = known || item.key() == key;
        for (const char* key : optional) known = known || item.key() == key;
        if (!known) throw schema_error(context + " has unknown field \"" + item.key() + "\"");
    }
}

inline int get_int(const nlohmann::json& j, const std::string& context) {
    if (!j.is_number_integer()) throw schema_error(context + " must be an integer");
    return j.get<int>();
}

inline std::string get_string(const nlohmann::json& j, const std::string& context) {
    if (!j.is_string()) throw schema_error(context + " must be a string");
    return j.get<std::string>();
}

}  // namespace detail

inline nlohmann::json budgets_to_json(const Budgets& b) {
    return {{"d4", b.d4}, {"d2", b.d2}, {"d1", b.d1}};
}

inline Budgets budgets_from_json(const nlohmann::json& j) {
    detail::require_keys(j, "budgets", {"d4", "d2", "d1"});
    return Budgets{detail::get_int(j.at("d4"), "budgets.d4"),
                   detail::get_int(j.at("d2"), "budgets.d2"),
                   detail::get_int(j.at("d1"), "budgets.d1")};
}

inline nlohmann::json outcome_to_json(const TwoHandleOutcome& outcome) {
    switch (outcome.kind()) {
        case TwoHandleOutcome::Kind::trivial_split: return {{"kind", "trivial"}};
        case TwoHandleOutcome::Kind::separating_split:
            return {{"kind", "split"},
                    {"left", format_component(outcome.left())},
                    {"right", format_component(outcome.right())}};
        case TwoHandleOutcome::Kind::compress:
            return {{"kind", "compress"}, {"result", format_component(outcome.result())}};
    }
    throw schema_error("unrepresentable outcome");
}

inline TwoHandleOutcome outcome_from_json(const nlohmann::json& j, const std::string& context) {
    if (!j.is_object() || !j.contains("kind"))
        throw schema_error(context + " must be an object with a \"kind\" field");
    const std::string kind = detail::get_string(j.at("kind"), context + ".kind");
    if (kind == "trivial") {
        detail::require_keys(j, context, {"kind"});
        return TwoHandleOutcome::trivial_split();
    }
    if (kind == "split") {
        detail::require_keys(j, context, {"kind", "left", "right"});
        return TwoHandleOutcome::separating_split(
            parse_component(detail::get_string(j.at("left"), context + ".left")),
            parse_component(detail::get_string(j.at("right"), context + ".right")));
    }
    if (kind == "compress") {
        detail::require_keys(j, context, {"kind", "result"});
        return TwoHandleOutcome::compress(
            parse_component(detail::get_string(j.at("result"), context + ".result")));
    }
    throw schema_error(context + ".kind must be \"trivial\", \"split\" or \"compress\"");
}

inline nlohmann::json plan_to_json(const Plan& plan) {
    nlohmann::json j;
    j["start"] = format_surface(plan.start);
    j["d4"] = nlohmann::json::array();
    for (const auto& move : plan.d4_moves) j["d4"].push_back(move.fa_component);
    j["d2"] = nlohmann::json::array();
    for (const auto& move : plan.d2_moves)
        j["d2"].push_back({{"component", move.component}, {"outcome", outcome_to_json(move.outcome)}});
    j["d1"] = nlohmann::json::array();
    for (const auto& move : plan.d1_moves) {
        switch (move.kind()) {
            case OneHandle::Kind::merge:
                j["d1"].push_back(
                    {{"kind", "merge"}, {"first", move.first()}, {"second", move.second()}});
                break;
            case OneHandle::Kind::self_plain:
                j["d1"].push_back({{"kind", "self_plain"}, {"component", move.component()}});
                break;
            case OneHandle::Kind::self_twisted:
                j["d1"].push_back({{"kind", "self_twisted"}, {"component", move.component()}});
                break;
        }
    }
    return j;
}

inline Plan plan_from_json(const nlohmann::json& j) {
    detail::require_keys(j, "plan", {"start"}, {"d4", "d2", "d1"});
    Plan plan;
    plan.start = parse_surface(detail::get_string(j.at("start"), "plan.start"));
    if (j.contains("d4")) {
        if (!j.at("d4").is_array()) throw schema_error("plan.d4 must be an array");
        for (const auto& item : j.at("d4"))
            plan.d4_moves.push_back(D4Family{detail::get_int(item, "plan.d4 entry")});
    }
    if (j.contains("d2")) {
        if (!j.at("d2").is_array()) throw schema_error("plan.d2 must be an array");
        for (const auto& item : j.at("d2")) {
            detail::require_keys(item, "plan.d2 entry", {"component", "outcome"});
            plan.d2_moves.push_back(
                TwoHandle{detail::get_int(item.at("component"), "plan.d2 entry.component"),
                          outcome_from_json(item.at("outcome"), "plan.d2 entry.outcome")});
        }
    }
    if (j.contains("d1")) {
        if (!j.at("d1").is_array()) throw schema_error("plan.d1 must be an array");
        for (const auto& item : j.at("d1")) {
            if (!item.is_object() || !item.contains("kind"))
                throw schema_error("plan.d1 entry must be an object with a \"kind\" field");
            const std::string kind = detail::get_string(item.at("kind"), "plan.d1 entry.kind");
            if (kind == "merge") {
                detail::require_keys(item, "plan.d1 entry", {"kind", "first", "second"});
                plan.d1_moves.push_back(
                    OneHandle::merge(detail::get_int(item.at("first"), "plan.d1 entry.first"),
                                     detail::get_int(item.at("second"), "plan.d1 entry.second")));
            } else if (kind == "self_plain" || kind == "self_twisted") {
                detail::require_keys(item, "plan.d1 entry", {"kind", "component"});
                const int c = detail::get_int(item.at("component"), "plan.d1 entry.component");
                plan.d1_moves.push_back(kind == "self_plain" ? OneHandle::self_plain(c)
                                                             : OneHandle::self_twisted(c));
            } else {
                throw schema_error(
                    "plan.d1 entry.kind must be \"merge\", \"self_plain\" or \"self_twisted\"");
            }
        }
    }
    return plan;
}

inline nlohmann::json verdict_to_json(const Verdict& verdict) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : verdict.checks)
        checks.push_back({{"name", c.name},
                          {"left", c.left},
                          {"relation", c.relation},
                          {"right", c.right},
                          {"holds", c.holds}});
    return {{"status", feasibility_status_name(verdict.status)}, {"checks", checks}};
}

inline nlohmann::json chain_to_json(const Theorem1Chain& chain) {
    return {{"po_final", chain.po_final},
            {"po_after_d2", chain.po_after_d2},
            {"p_after_d2", chain.p_after_d2},
            {"p_after_d4", chain.p_after_d4},
            {"three_p_start", chain.three_p_start}};
}

inline nlohmann::json trace_to_json(const Trace& trace) {
    nlohmann::json surfaces = nlohmann::json::array();
    for (const auto& s : trace.surfaces) surfaces.push_back(format_surface(s));
    nlohmann::json deltas = nlohmann::json::array();
    for (const auto& d : trace.deltas)
        deltas.push_back(
            {{"p", d.p}, {"p_odd", d.p_odd}, {"chi", d.euler}, {"components", d.components}});
    return {{"surfaces", surfaces},
            {"after_d4", format_surface(trace.after_d4)},
            {"after_d2", format_surface(trace.after_d2)},
            {"final", format_surface(trace.final_surface)},
            {"deltas", deltas}};
}

inline nlohmann::json certificate_to_json(const PlanCertificate& cert) {
    nlohmann::json j;
    j["plan"] = plan_to_json(cert.plan);
    j["trace"] = trace_to_json(cert.trace);
    j["verdict"] = verdict_to_json(cert.conditions_verdict);
    j["theorem1_chain"] = chain_to_json(cert.theorem1_chain);
    j["discrepancy"] = cert.discrepancy;
    if (cert.stated_target) j["stated_target"] = format_surface(*cert.stated_target);
    return j;
}

inline nlohmann::json report_to_json(const ReachabilityReport& report) {
    nlohmann::json reachable = nlohmann::json::array();
    for (const auto& s : report.reachable) reachable.push_back(format_surface(s));
    nlohmann::json counterexamples = nlohmann::json::array();
    for (const auto& c : report.counterexamples)
        counterexamples.push_back(
            {{"surface", format_surface(c.surface)}, {"condition", c.condition}});
    return {{"start", format_surface(report.start)},
            {"budgets", budgets_to_json(report.budgets)},
            {"reachable", reachable},
            {"plan_count", report.plan_count},
            {"counterexamples", counterexamples}};
}

inline nlohmann::json sweep_to_json(const SweepReport& sweep) {
    nlohmann::json counterexamples = nlohmann::json::array();
    for (const auto& c : sweep.counterexamples)
        counterexamples.push_back({{"start", format_surface(c.start)},
                                   {"reached", format_surface(c.reached)},
                                   {"condition", c.condition}});
    nlohmann::json budgets = {{"d2", sweep.options.d2}, {"d1", sweep.options.d1}};
    if (sweep.options.d4)
        budgets["d4"] = *sweep.options.d4;
    else
        budgets["d4"] = nullptr;  // per-start capacity P(F_a)
    return {{"universe",
             {{"max_components", sweep.options.max_components},
              {"max_genus", sweep.options.max_genus}}},
            {"budgets", budgets},
            {"cases", sweep.cases},
            {"pairs", sweep.pairs},
            {"plans", sweep.plans},
            {"counterexamples", counterexamples},
            {"elapsed_ms", sweep.elapsed_ms}};
}

struct VerifyResult {
    bool ok = false;
    std::string message;
    PlanCertificate recomputed;
};

/// Verifies a plan or certificate document: replays the plan and, when the
/// document carries claimed results (trace, verdict, chain, discrepancy),
/// compares them against the recomputation. A document is a certificate when
/// it has a "plan" field, otherwise it is read as a bare plan.
inline VerifyResult verify_document(const nlohmann::json& doc) {
    VerifyResult result;
    if (!doc.is_object()) throw schema_error("document must be a JSON object");

    const bool is_certificate = doc.contains("plan");
    Plan plan;
    if (is_certificate) {
        detail::require_keys(doc, "certificate", {"plan"},
                             {"trace", "verdict", "theorem1_chain", "discrepancy",
                              "stated_target"});
        plan = plan_from_json(doc.at("plan"));
    } else {
        plan = plan_from_json(doc);
    }

    try {
        result.recomputed = make_certificate(plan);
    } catch (const plan_error& e) {
        result.message = std::string("plan is invalid: ") + e.what();
        return result;
    } catch (const std::invalid_argument& e) {
        result.message = std::string("plan is not certifiable: ") + e.what();
        return result;
    }

    if (is_certificate) {
        const nlohmann::json computed = certificate_to_json(result.recomputed);
        for (const char* key : {"trace", "verdict", "theorem1_chain"}) {
            if (doc.contains(key) && doc.at(key) != computed.at(key)) {
                result.message = std::string("claimed ") + key + " does not match recomputation";
                return result;
            }
        }
        if (doc.contains("stated_target")) {
            const Surface stated =
                parse_surface(detail::get_string(doc.at("stated_target"), "stated_target"));
            const bool expect = stated != result.recomputed.trace.final_surface;
            const bool claimed = doc.value("discrepancy", false);
            if (claimed != expect) {
                result.message = expect
                                     ? "final surface differs from stated_target but the "
                                       "discrepancy flag is not set"
                                     : "discrepancy flag set but the final surface equals "
                                       "stated_target";
                return result;
            }
            result.recomputed.stated_target = stated;
            result.recomputed.discrepancy = expect;
        } else if (doc.value("discrepancy", false)) {
            result.message = "discrepancy flag set without a stated_target";
            return result;
        }
    }

    result.ok = true;
    result.message = "verified";
    return result;
}

}  // namespace handleplan
