// Command-line front end: surface invariants, feasibility checks, plan
// search, the Theorem 2 constructor, certificate verification, reachability
// reports and the universal condition sweep.
//
// Exit codes: 0 success/feasible, 1 infeasible (or sweep counterexamples,
// or failed verification), 2 unknown / enumeration budget exceeded,
// 64 usage error, 65 parse error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "handleplan/handleplan.hpp"

namespace hp = handleplan;

namespace {

struct OutputOptions {
    bool json = false;
    std::string out_path;
};

void write_payload(const OutputOptions& output, const nlohmann::json& payload,
                   const std::string& text) {
    if (output.json)
        std::cout << payload.dump(2) << "\n";
    else
        std::cout << text;
    if (!output.out_path.empty()) {
        std::ofstream file(output.out_path);
        if (!file) throw std::invalid_argument("cannot write to " + output.out_path);
        file << payload.dump(2) << "\n";
    }
}

hp::Budgets resolve_budgets(const std::string& budget_arg, const hp::Surface& fa) {
    if (budget_arg.empty()) {
        const long long p = std::min<long long>(fa.p(), 1'000'000);
        return hp::Budgets{static_cast<int>(p), static_cast<int>(p) + 2,
                           static_cast<int>(p) + 2};
    }
    hp::Budgets budgets;
    char comma1 = 0;
    char comma2 = 0;
    std::istringstream in(budget_arg);
    if (!(in >> budgets.d4 >> comma1 >> budgets.d2 >> comma2 >> budgets.d1) || comma1 != ',' ||
        comma2 != ',' || !(in >> std::ws).eof())
        throw std::invalid_argument("--budgets expects three integers as d4,d2,d1");
    if (budgets.d4 < 0 || budgets.d2 < 0 || budgets.d1 < 0)
        throw std::invalid_argument("budgets must be non-negative");
    return budgets;
}

std::string headline(const hp::Surface& s) {
    std::string line;
    for (std::size_t i = 0; i < s.component_count(); ++i) {
        if (i > 0) line += " + ";
        line += hp::component_code(s.component(i));
    }
    line += ": P=" + std::to_string(s.p()) + ", P_o=" + std::to_string(s.p_odd()) +
            ", chi=" + std::to_string(s.euler());
    return line;
}

std::string describe_verdict(const hp::Verdict& verdict) {
    std::string text = std::string("status: ") + hp::feasibility_status_name(verdict.status) + "\n";
    for (const auto& check : verdict.checks)
        text += "  " + check.name + ": " + std::to_string(check.left) + " " + check.relation +
                " " + std::to_string(check.right) + (check.holds ? "  [ok]" : "  [violated]") +
                "\n";
    return text;
}

std::string describe_certificate(const hp::PlanCertificate& cert) {
    const auto& chain = cert.theorem1_chain;
    std::string text = "plan: " + std::to_string(cert.plan.d4_moves.size()) + " d4 + " +
                       std::to_string(cert.plan.d2_moves.size()) + " d2 + " +
                       std::to_string(cert.plan.d1_moves.size()) + " d1 moves\n";
    text += "start: " + hp::format_surface(cert.plan.start) + "\n";
    text += "final: " + hp::format_surface(cert.trace.final_surface) + "\n";
    text += "chain: P_o(final)=" + std::to_string(chain.po_final) +
            " <= P_o(after d2)=" + std::to_string(chain.po_after_d2) +
            " <= P(after d2)=" + std::to_string(chain.p_after_d2) +
            " <= P(after d4)=" + std::to_string(chain.p_after_d4) +
            " <= 3*P(start)=" + std::to_string(chain.three_p_start) + "\n";
    if (cert.plan.total_moves() == 0)
        text += "note: empty plan (product over the whole interval, no singular value)\n";
    if (cert.stated_target)
        text += "stated target: " + hp::format_surface(*cert.stated_target) + "\n";
    if (cert.discrepancy)
        text += "warning: final surface differs from the stated target "
                "(extended-mode bookkeeping discrepancy)\n";
    return text;
}

int run_info(const std::string& surface_arg, const OutputOptions& output) {
    const hp::Surface s = hp::parse_surface(surface_arg);
    nlohmann::json payload;
    payload["notation"] = hp::format_surface(s);
    payload["components"] = nlohmann::json::array();
    for (const auto& c : s.components()) payload["components"].push_back(hp::component_code(c));
    payload["component_count"] = s.component_count();
    payload["p"] = s.p();
    payload["p_odd"] = s.p_odd();
    payload["chi"] = s.euler();
    write_payload(output, payload,
                  headline(s) + "\nnotation: " + hp::format_surface(s) + "\n");
    return 0;
}

int run_check(const std::string& fa_arg, const std::string& fb_arg, const std::string& mode,
              const OutputOptions& output) {
    const hp::Surface fa = hp::parse_surface(fa_arg);
    const hp::Surface fb = hp::parse_surface(fb_arg);
    const hp::Verdict verdict = mode == "morse" ? hp::check_morse(fa, fb)
                                                : hp::check_class_m(fa, fb);
    nlohmann::json payload = hp::verdict_to_json(verdict);
    payload["mode"] = mode;
    payload["fa"] = hp::format_surface(fa);
    payload["fb"] = hp::format_surface(fb);
    write_payload(output, payload, describe_verdict(verdict));
    return verdict.passed() ? 0 : 1;
}

int run_plan(const std::string& fa_arg, const std::string& fb_arg,
             const std::string& budget_arg, const OutputOptions& output) {
    const hp::Surface fa = hp::parse_surface(fa_arg);
    const hp::Surface fb = hp::parse_surface(fb_arg);
    const hp::Budgets budgets = resolve_budgets(budget_arg, fa);
    const hp::SearchResult result = hp::plan_search(fa, fb, budgets);
    switch (result.status) {
        case hp::SearchStatus::found:
            write_payload(output, hp::certificate_to_json(*result.certificate),
                          describe_certificate(*result.certificate));
            return 0;
        case hp::SearchStatus::infeasible:
            write_payload(output, {{"status", "infeasible"}, {"reason", result.reason}},
                          "infeasible: " + result.reason + "\n");
            return 1;
        case hp::SearchStatus::unknown:
            write_payload(output, {{"status", "unknown"}, {"reason", result.reason}},
                          "unknown: " + result.reason + "\n");
            return 2;
    }
    return 70;
}

int run_thm2(const std::string& fa_arg, int p, int p_prime, const OutputOptions& output) {
    const hp::Surface fa = hp::parse_surface(fa_arg);
    const hp::PlanCertificate cert = hp::construct_theorem2(fa, p, p_prime);
    write_payload(output, hp::certificate_to_json(cert), describe_certificate(cert));
    return 0;
}

int run_verify(const std::string& path, const OutputOptions& output) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open " + path);
    nlohmann::json doc = nlohmann::json::parse(file);
    const hp::VerifyResult result = hp::verify_document(doc);
    nlohmann::json payload;
    payload["ok"] = result.ok;
    payload["message"] = result.message;
    if (result.ok) payload["certificate"] = hp::certificate_to_json(result.recomputed);
    write_payload(output, payload, result.message + "\n");
    return result.ok ? 0 : 1;
}

int run_reach(const std::string& fa_arg, const std::string& budget_arg,
              const OutputOptions& output) {
    const hp::Surface fa = hp::parse_surface(fa_arg);
    const hp::Budgets budgets = resolve_budgets(budget_arg, fa);
    const hp::ReachabilityReport report = hp::reachable_set(fa, budgets);
    std::string text = "start: " + hp::format_surface(report.start) + "\n";
    text += "budgets: d4=" + std::to_string(budgets.d4) + " d2=" + std::to_string(budgets.d2) +
            " d1=" + std::to_string(budgets.d1) + "\n";
    text += "plans: " + std::to_string(report.plan_count) + "\n";
    text += "reachable surfaces: " + std::to_string(report.reachable.size()) + "\n";
    for (const auto& s : report.reachable) text += "  " + hp::format_surface(s) + "\n";
    text += std::to_string(report.counterexamples.size()) + " counterexamples\n";
    write_payload(output, hp::report_to_json(report), text);
    return 0;
}

int run_sweep(const hp::SweepOptions& options, const OutputOptions& output) {
    const hp::SweepReport report = hp::sweep_theorem1(options);
    std::string text = "cases: " + std::to_string(report.cases) +
                       ", pairs: " + std::to_string(report.pairs) +
                       ", plans: " + std::to_string(report.plans) +
                       ", elapsed: " + std::to_string(report.elapsed_ms) + " ms\n";
    text += std::to_string(report.counterexamples.size()) + " counterexamples\n";
    for (const auto& c : report.counterexamples)
        text += "  " + hp::format_surface(c.start) + " reaches " + hp::format_surface(c.reached) +
                " violating " + c.condition + "\n";
    write_payload(output, hp::sweep_to_json(report), text);
    return report.counterexamples.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"staged surface cobordism planner"};
    app.require_subcommand(1);

    OutputOptions output;

    std::string info_surface;
    auto* info = app.add_subcommand("info", "canonical form and invariants of a surface");
    info->add_option("surface", info_surface, "surface notation, e.g. \"T + 2*P\"")->required();

    std::string check_fa;
    std::string check_fb;
    std::string mode = "class-m";
    auto* check = app.add_subcommand("check", "necessary-condition check between two surfaces");
    check->add_option("fa", check_fa, "start surface")->required();
    check->add_option("fb", check_fb, "target surface")->required();
    check->add_option("--mode", mode, "checker variant")
        ->check(CLI::IsMember({"class-m", "morse"}));

    std::string plan_fa;
    std::string plan_fb;
    std::string plan_budgets;
    auto* plan = app.add_subcommand("plan", "search for a staged plan from fa to fb");
    plan->add_option("fa", plan_fa, "start surface")->required();
    plan->add_option("fb", plan_fb, "target surface")->required();
    plan->add_option("--budgets", plan_budgets, "per-stage move limits d4,d2,d1");

    std::string thm2_fa;
    int thm2_p = 0;
    int thm2_p_prime = 0;
    auto* thm2 = app.add_subcommand(
        "thm2", "construct the plan adding p projective planes to a non-orientable surface");
    thm2->add_option("fa", thm2_fa, "connected non-orientable start surface")->required();
    thm2->add_option("p", thm2_p, "even number of projective planes to add")->required();
    thm2->add_option("p_prime", thm2_p_prime, "number of circle families, p/2..P(fa)")
        ->required();

    std::string verify_path;
    auto* verify = app.add_subcommand("verify", "replay and check a plan or certificate file");
    verify->add_option("file", verify_path, "JSON plan or certificate")->required();

    std::string reach_fa;
    std::string reach_budgets;
    auto* reach = app.add_subcommand("reach", "enumerate all surfaces reachable within budgets");
    reach->add_option("fa", reach_fa, "start surface")->required();
    reach->add_option("--budgets", reach_budgets, "per-stage move limits d4,d2,d1");

    hp::SweepOptions sweep_options;
    int sweep_d4 = -1;
    auto* sweep = app.add_subcommand(
        "sweep", "verify the necessary conditions over every plan from a surface universe");
    sweep->add_flag("--seed-universe", "use the built-in test universe bounds");
    sweep->add_option("--max-components", sweep_options.max_components,
                      "components per universe surface");
    sweep->add_option("--max-genus", sweep_options.max_genus, "genus bound per component");
    sweep->add_option("--d2", sweep_options.d2, "d2 budget");
    sweep->add_option("--d1", sweep_options.d1, "d1 budget");
    sweep->add_option("--d4", sweep_d4, "d4 budget (default: capacity P of each start)");

    for (auto* cmd : {info, check, plan, thm2, verify, reach, sweep}) {
        cmd->add_flag("--json", output.json, "print the JSON payload instead of text");
        cmd->add_option("--out", output.out_path, "also write the JSON payload to FILE");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 64;
    }

    try {
        if (*info) return run_info(info_surface, output);
        if (*check) return run_check(check_fa, check_fb, mode, output);
        if (*plan) return run_plan(plan_fa, plan_fb, plan_budgets, output);
        if (*thm2) return run_thm2(thm2_fa, thm2_p, thm2_p_prime, output);
        if (*verify) return run_verify(verify_path, output);
        if (*reach) return run_reach(reach_fa, reach_budgets, output);
        if (*sweep) {
            if (sweep_d4 >= 0) sweep_options.d4 = sweep_d4;
            return run_sweep(sweep_options, output);
        }
    } catch (const hp::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 65;
    } catch (const hp::schema_error& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 65;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "json error: " << e.what() << "\n";
        return 65;
    } catch (const hp::budget_error& e) {
        std::cerr << "enumeration budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const hp::plan_error& e) {
        std::cerr << "invalid plan: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
    return 64;
}
