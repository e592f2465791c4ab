#pragma once

/**
 * @file oracle.hpp
 * @brief Brute-force ground truth for the planner and for Theorem 1.
 *
 * The oracle enumerates every staged plan within the budgets, with no
 * pruning, no symmetry reduction and index-level move identity, so planner
 * bugs (especially unsound pruning) cannot hide. It shares only the move
 * menus with the move layer. Plan counting and reachable-set computation are
 * memoized over (surface, capacity use, move counts), which is exact because
 * the legal futures of a state depend on nothing else.
 */

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "handleplan/conditions.hpp"
#include "handleplan/moves.hpp"
#include "handleplan/planner.hpp"
#include "handleplan/surface.hpp"

namespace handleplan {

struct OracleOptions {
    /// Additional cap on d4 + d2 + d1 moves, on top of the per-stage budgets.
    std::optional<int> max_total_moves;
    /// Hard ceiling on memoized states; exceeded means budget_error, never
    /// silent truncation.
    std::size_t max_states = 4'000'000;
};

/// A reachable surface violating a necessary condition against the start.
struct OracleCounterexample {
    Surface surface;
    std::string condition;
};

struct ReachabilityReport {
    Surface start;
    Budgets budgets;
    std::vector<Surface> reachable;  // canonical, sorted, deduplicated
    std::uint64_t plan_count = 0;    // distinct staged plans within budgets
    std::vector<OracleCounterexample> counterexamples;
};

namespace detail {

// State identity for memoization: capacity use, stage counters and the
// current surface, flattened to one integer vector.
inline std::vector<int> oracle_key(const Surface& surface, const std::vector<int>& used, int u2,
                                   int u1) {
    std::vector<int> key;
    key.reserve(2 + used.size() + 2 * surface.component_count());
    key.push_back(u2);
    key.push_back(u1);
    key.insert(key.end(), used.begin(), used.end());
    for (const auto& c : surface.components()) {
        key.push_back(c.is_orientable() ? 0 : 1);
        key.push_back(c.genus());
    }
    return key;
}

struct OracleWalk {
    const Surface& start;
    const Budgets& budgets;
    const OracleOptions& options;
    std::map<std::vector<int>, std::uint64_t> memo;
    std::set<Surface> reachable;

    std::uint64_t visit(const Surface& surface, std::vector<int>& used, int u4, int u2, int u1) {
        const auto key = oracle_key(surface, used, u2, u1);
        if (const auto it = memo.find(key); it != memo.end()) return it->second;
        if (memo.size() >= options.max_states)
            throw budget_error("enumeration state limit of " +
                               std::to_string(options.max_states) + " states exceeded");
        memo.emplace(key, 0);
        reachable.insert(surface);

        std::uint64_t count = 1;  // stopping here is one complete plan
        if (options.max_total_moves && u4 + u2 + u1 >= *options.max_total_moves) {
            memo[key] = count;
            return count;
        }

        if (u2 == 0 && u1 == 0 && u4 < budgets.d4) {
            for (std::size_t i = 0; i < start.component_count(); ++i) {
                if (used[i] >= start.component(i).p()) continue;
                ++used[i];
                const Surface next = surface.with_added(Component::klein_bottle());
                count += visit(next, used, u4 + 1, u2, u1);
                --used[i];
            }
        }
        if (u1 == 0 && u2 < budgets.d2) {
            for (std::size_t ci = 0; ci < surface.component_count(); ++ci)
                for (const auto& outcome : enumerate_d2_outcomes(surface.component(ci)))
                    count += visit(apply_d2(surface, static_cast<int>(ci), outcome), used, u4,
                                   u2 + 1, u1);
        }
        if (u1 < budgets.d1) {
            for (std::size_t i = 0; i < surface.component_count(); ++i)
                for (std::size_t j = i + 1; j < surface.component_count(); ++j)
                    count += visit(apply_d1(surface, OneHandle::merge(static_cast<int>(i),
                                                                      static_cast<int>(j))),
                                   used, u4, u2, u1 + 1);
            for (std::size_t i = 0; i < surface.component_count(); ++i) {
                count += visit(apply_d1(surface, OneHandle::self_plain(static_cast<int>(i))),
                               used, u4, u2, u1 + 1);
                count += visit(apply_d1(surface, OneHandle::self_twisted(static_cast<int>(i))),
                               used, u4, u2, u1 + 1);
            }
        }

        memo[key] = count;
        return count;
    }
};

}  // namespace detail

/// Enumerates every valid staged plan from `fa` within the budgets and
/// reports all reachable final surfaces, the number of distinct plans, and
/// every reachable surface violating a necessary condition (Theorem 1 says
/// there are none; the field exists so tests can verify that, not trust it).
inline ReachabilityReport reachable_set(const Surface& fa, const Budgets& budgets,
                                        const OracleOptions& options = {}) {
    if (fa.empty()) throw std::invalid_argument("reachable_set requires a nonempty surface");
    if (budgets.d4 < 0 || budgets.d2 < 0 || budgets.d1 < 0)
        throw std::invalid_argument("budgets must be non-negative");

    detail::OracleWalk walk{fa, budgets, options, {}, {}};
    std::vector<int> used(fa.component_count(), 0);

    ReachabilityReport report;
    report.start = fa;
    report.budgets = budgets;
    report.plan_count = walk.visit(fa, used, 0, 0, 0);
    report.reachable.assign(walk.reachable.begin(), walk.reachable.end());
    for (const auto& s : report.reachable) {
        const Verdict verdict = check_class_m(fa, s);
        if (!verdict.passed())
            report.counterexamples.push_back({s, verdict.first_failed()});
    }
    return report;
}

struct AgreementVerdict {
    bool agree = false;
    bool feasible = false;  // oracle membership, the ground truth
    std::string detail;
};

/// Checks the planner against the oracle for one (fa, fb, budgets) triple:
/// plan_search must find a plan exactly when fb is oracle-reachable, and a
/// found certificate must actually end at fb.
inline AgreementVerdict cross_validate(const Surface& fa, const Surface& fb,
                                       const Budgets& budgets,
                                       const OracleOptions& options = {}) {
    if (fa.empty() || fb.empty())
        throw std::invalid_argument("cross_validate requires nonempty surfaces");

    const ReachabilityReport report = reachable_set(fa, budgets, options);
    const bool oracle_reaches =
        std::binary_search(report.reachable.begin(), report.reachable.end(), fb);

    bool planner_found = false;
    std::string planner_note;
    if (budgets.d4 == 0 && budgets.d2 == 0 && budgets.d1 == 0 && fa != fb) {
        planner_note = "zero budgets admit only the identity";
    } else {
        SearchOptions search_options;
        search_options.max_total_moves = options.max_total_moves;
        const SearchResult result = plan_search(fa, fb, budgets, search_options);
        planner_found = result.status == SearchStatus::found;
        planner_note = search_status_name(result.status);
        if (!result.reason.empty()) planner_note += " (" + result.reason + ")";
        if (planner_found && result.certificate->trace.final_surface != fb) {
            planner_note += ", certificate ends at the wrong surface";
            planner_found = false;
            AgreementVerdict verdict{false, oracle_reaches, planner_note};
            return verdict;
        }
    }

    AgreementVerdict verdict;
    verdict.feasible = oracle_reaches;
    verdict.agree = planner_found == oracle_reaches;
    verdict.detail = "planner: " + planner_note +
                     ", oracle: " + (oracle_reaches ? "reachable" : "not reachable");
    return verdict;
}

/// All surfaces with 1..max_components components, each orientable of genus
/// 0..max_genus or non-orientable of genus 1..max_genus, sorted canonically.
inline std::vector<Surface> surface_universe(int max_components, int max_genus) {
    if (max_components < 1) throw std::invalid_argument("universe needs max_components >= 1");
    if (max_genus < 0) throw std::invalid_argument("universe needs max_genus >= 0");

    std::vector<Component> menu;
    for (int g = 0; g <= max_genus; ++g) menu.push_back(Component::orientable(g));
    for (int k = 1; k <= max_genus; ++k) menu.push_back(Component::non_orientable(k));

    std::vector<Surface> out;
    std::vector<Component> pick;
    const auto rec = [&](auto&& self, std::size_t from) -> void {
        if (!pick.empty()) out.emplace_back(pick);
        if (pick.size() == static_cast<std::size_t>(max_components)) return;
        for (std::size_t i = from; i < menu.size(); ++i) {
            pick.push_back(menu[i]);
            self(self, i);
            pick.pop_back();
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

struct SweepOptions {
    int max_components = 2;
    int max_genus = 3;
    int d2 = 3;
    int d1 = 3;
    /// D4 budget per start surface; defaults to its full capacity P(F_a).
    std::optional<int> d4;
    OracleOptions oracle;
};

struct SweepCounterexample {
    Surface start;
    Surface reached;
    std::string condition;
};

struct SweepReport {
    SweepOptions options;
    std::uint64_t cases = 0;  // start surfaces enumerated
    std::uint64_t pairs = 0;  // (start, reachable surface) pairs checked
    std::uint64_t plans = 0;  // staged plans enumerated in total
    std::vector<SweepCounterexample> counterexamples;
    std::int64_t elapsed_ms = 0;
};

/// Universal necessary-condition verification: enumerates every staged plan
/// from every universe surface within the budgets and records each reachable
/// surface that violates a condition. An empty counterexample list is the
/// machine-checked content of Theorem 1 at this scale.
inline SweepReport sweep_theorem1(const SweepOptions& options = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepReport sweep;
    sweep.options = options;
    for (const Surface& fa : surface_universe(options.max_components, options.max_genus)) {
        Budgets budgets;
        budgets.d4 = options.d4 ? *options.d4 : static_cast<int>(fa.p());
        budgets.d2 = options.d2;
        budgets.d1 = options.d1;
        const ReachabilityReport report = reachable_set(fa, budgets, options.oracle);
        sweep.cases += 1;
        sweep.pairs += report.reachable.size();
        sweep.plans += report.plan_count;
        for (const auto& bad : report.counterexamples)
            sweep.counterexamples.push_back({fa, bad.surface, bad.condition});
    }
    sweep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    return sweep;
}

}  // namespace handleplan
