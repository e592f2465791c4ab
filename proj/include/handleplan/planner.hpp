#pragma once

/**
 * @file planner.hpp
 * @brief Staged breadth-first plan search and the Theorem 2 recipe.
 *
 * Theorem 2 of this project: for connected non-orientable F_a, every even p
 * with 1 <= p <= 2 P(F_a) admits a staged plan from F_a whose final surface
 * is F_a plus p projective planes, built from p/2 Mobius families and p/2
 * 2-handles. The constructor also offers the wider parameter range
 * p/2 <= p' <= P(F_a); there the literal outcome carries extra spheres, which
 * the certificate reports as a discrepancy instead of hiding it.
 */

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "handleplan/conditions.hpp"
#include "handleplan/moves.hpp"
#include "handleplan/surface.hpp"

namespace handleplan {

/// Raised when an enumeration or search would exceed its state allowance.
class budget_error : public error {
public:
    explicit budget_error(const std::string& message) : error(message) {}
};

/// The five chained quantities certified with every plan, left to right:
/// P_o(final) <= P_o(after D2) <= P(after D2) <= P(after D4) <= 3 P(start).
struct Theorem1Chain {
    long long po_final = 0;
    long long po_after_d2 = 0;
    long long p_after_d2 = 0;
    long long p_after_d4 = 0;
    long long three_p_start = 0;

    bool holds() const {
        return po_final <= po_after_d2 && po_after_d2 <= p_after_d2 &&
               p_after_d2 <= p_after_d4 && p_after_d4 <= three_p_start;
    }

    bool operator==(const Theorem1Chain&) const = default;
};

/// A plan together with everything needed to audit it offline.
struct PlanCertificate {
    Plan plan;
    Trace trace;
    Verdict conditions_verdict;
    Theorem1Chain theorem1_chain;
    /// Set when the construction's nominal target differs from the literal
    /// trace end (extended-mode Theorem 2).
    bool discrepancy = false;
    std::optional<Surface> stated_target;
};

/// Replays the plan and assembles the full certificate. Throws plan_error on
/// an invalid plan; the start surface must be nonempty.
inline PlanCertificate make_certificate(const Plan& plan) {
    PlanCertificate cert;
    cert.plan = plan;
    cert.trace = apply_plan(plan);
    cert.conditions_verdict = check_class_m(plan.start, cert.trace.final_surface);
    cert.theorem1_chain =
        Theorem1Chain{cert.trace.final_surface.p_odd(), cert.trace.after_d2.p_odd(),
                      cert.trace.after_d2.p(), cert.trace.after_d4.p(), 3 * plan.start.p()};
    return cert;
}

enum class SearchStatus { found, infeasible, unknown };

inline const char* search_status_name(SearchStatus s) {
    switch (s) {
        case SearchStatus::found: return "found";
        case SearchStatus::infeasible: return "infeasible";
        case SearchStatus::unknown: return "unknown";
    }
    return "?";
}

struct SearchResult {
    SearchStatus status = SearchStatus::unknown;
    std::optional<PlanCertificate> certificate;
    /// Failed condition name or "chi_accounting" when infeasible;
    /// "budgets_exhausted" or "state_limit" when unknown.
    std::string reason;
};

struct SearchOptions {
    /// Additional cap on d4 + d2 + d1 moves, on top of the per-stage budgets.
    std::optional<int> max_total_moves;
    /// Hard ceiling on stored search states before giving up.
    std::size_t max_states = 2'000'000;
};

namespace detail {

using AppliedMove = std::variant<std::monostate, D4Family, TwoHandle, OneHandle>;

struct SearchNode {
    Surface surface;
    int parent = -1;
    AppliedMove move;
    int u4 = 0;
    int u2 = 0;
    int u1 = 0;
};

// Stage rank of a state: 0 while d4 moves are still allowed, 1 once a d2
// move happened, 2 once a d1 move happened.
inline int stage_rank(int u2, int u1) { return u1 > 0 ? 2 : (u2 > 0 ? 1 : 0); }

// Capacity vector canonicalized across equal start components: targeting
// either of two equal components with equal counts yields congruent states,
// so counts are sorted within each group of equal components.
inline std::vector<int> canonical_used(const Surface& start, std::vector<int> used) {
    std::size_t lo = 0;
    for (std::size_t i = 1; i <= used.size(); ++i) {
        if (i == used.size() || start.component(i) != start.component(lo)) {
            std::sort(used.begin() + static_cast<std::ptrdiff_t>(lo),
                      used.begin() + static_cast<std::ptrdiff_t>(i));
            lo = i;
        }
    }
    return used;
}

// Per-move delta laws give hard bounds on what the remaining budget can still
// change; a child that cannot reach the target anymore is not worth storing.
inline bool can_still_reach(const Surface& target, const Surface& next, int u4, int u2, int u1,
                            const Budgets& budgets, long long capacity_left,
                            const std::optional<int>& max_total) {
    const bool can_d4 = u2 == 0 && u1 == 0;
    const bool can_d2 = u1 == 0;
    long long rem_d4 = can_d4 ? std::min<long long>(budgets.d4 - u4, capacity_left) : 0;
    long long rem_d2 = can_d2 ? budgets.d2 - u2 : 0;
    long long rem_d1 = budgets.d1 - u1;
    if (max_total) {
        const long long rem_total = *max_total - (u4 + u2 + u1);
        rem_d4 = std::min(rem_d4, rem_total);
        rem_d2 = std::min(rem_d2, rem_total);
        rem_d1 = std::min(rem_d1, rem_total);
    }

    const long long chi_diff = target.euler() - next.euler();
    if (chi_diff % 2 != 0) return false;
    if (chi_diff / 2 > rem_d2 || -chi_diff / 2 > rem_d1) return false;

    const long long comp_diff = static_cast<long long>(target.component_count()) -
                                static_cast<long long>(next.component_count());
    if (comp_diff > rem_d4 + rem_d2 || -comp_diff > rem_d1) return false;

    const long long po_diff = target.p_odd() - next.p_odd();
    if (((po_diff % 2) + 2) % 2 != 0) return false;
    if (po_diff > 2 * rem_d2 || -po_diff > 2 * rem_d1) return false;

    return true;
}

inline Plan reconstruct_plan(const Surface& start, const std::vector<SearchNode>& nodes,
                             int index) {
    std::vector<AppliedMove> path;
    for (int at = index; at >= 0; at = nodes[static_cast<std::size_t>(at)].parent)
        path.push_back(nodes[static_cast<std::size_t>(at)].move);
    Plan plan;
    plan.start = start;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        if (const auto* d4 = std::get_if<D4Family>(&*it)) plan.d4_moves.push_back(*d4);
        if (const auto* d2 = std::get_if<TwoHandle>(&*it)) plan.d2_moves.push_back(*d2);
        if (const auto* d1 = std::get_if<OneHandle>(&*it)) plan.d1_moves.push_back(*d1);
    }
    return plan;
}

// Breadth-first exploration shared by the targeted and the exhaustive entry
// points. Expansion order is fixed (d4 targets ascending, d2 components
// ascending with the canonical outcome menu, d1 merges lexicographic then
// self moves), so the first plan found is the canonically least one at its
// depth. Visiting is keyed by (stage, capacity vector, surface): two states
// agreeing there admit identical futures, and breadth-first order reaches
// the key first with maximal remaining budgets.
template <typename OnPop>
bool bfs_plans(const Surface& start, const Budgets& budgets, const SearchOptions& options,
               const Surface* target, OnPop&& on_pop) {
    std::vector<SearchNode> nodes;
    nodes.push_back(SearchNode{start, -1, std::monostate{}, 0, 0, 0});

    using Key = std::tuple<int, std::vector<int>, Surface>;
    std::set<Key> visited;
    visited.insert(Key{0, canonical_used(start, std::vector<int>(start.component_count(), 0)), start});

    for (std::size_t qi = 0; qi < nodes.size(); ++qi) {
        // Copy out: push_back below may reallocate the node storage.
        const Surface surface = nodes[qi].surface;
        const int u4 = nodes[qi].u4;
        const int u2 = nodes[qi].u2;
        const int u1 = nodes[qi].u1;

        if (on_pop(nodes, static_cast<int>(qi))) return true;

        if (options.max_total_moves && u4 + u2 + u1 >= *options.max_total_moves) continue;

        std::vector<int> used(start.component_count(), 0);
        for (int at = static_cast<int>(qi); at >= 0;
             at = nodes[static_cast<std::size_t>(at)].parent)
            if (const auto* d4 = std::get_if<D4Family>(&nodes[static_cast<std::size_t>(at)].move))
                ++used[static_cast<std::size_t>(d4->fa_component)];
        long long capacity_left = 0;
        for (std::size_t i = 0; i < start.component_count(); ++i)
            capacity_left += start.component(i).p() - used[i];

        const auto push = [&](const Surface& next, AppliedMove move, int n4, int n2, int n1,
                              const std::vector<int>& next_used) {
            if (target &&
                !can_still_reach(*target, next, n4, n2, n1, budgets,
                                 capacity_left - (n4 > u4 ? 1 : 0), options.max_total_moves))
                return;
            Key key{stage_rank(n2, n1), canonical_used(start, next_used), next};
            if (!visited.insert(std::move(key)).second) return;
            if (nodes.size() >= options.max_states)
                throw budget_error("search state limit of " +
                                   std::to_string(options.max_states) + " states exceeded");
            nodes.push_back(SearchNode{next, static_cast<int>(qi), std::move(move), n4, n2, n1});
        };

        if (u2 == 0 && u1 == 0 && u4 < budgets.d4) {
            for (std::size_t i = 0; i < start.component_count(); ++i) {
                if (used[i] >= start.component(i).p()) continue;
                bool mirrored = false;
                for (std::size_t j = 0; j < i && !mirrored; ++j)
                    mirrored = start.component(j) == start.component(i) && used[j] == used[i];
                if (mirrored) continue;
                auto next_used = used;
                ++next_used[i];
                push(surface.with_added(Component::klein_bottle()),
                     D4Family{static_cast<int>(i)}, u4 + 1, u2, u1, next_used);
            }
        }

        if (u1 == 0 && u2 < budgets.d2) {
            for (std::size_t ci = 0; ci < surface.component_count(); ++ci) {
                if (ci > 0 && surface.component(ci) == surface.component(ci - 1)) continue;
                for (const auto& outcome : enumerate_d2_outcomes(surface.component(ci))) {
                    push(apply_d2(surface, static_cast<int>(ci), outcome),
                         TwoHandle{static_cast<int>(ci), outcome}, u4, u2 + 1, u1, used);
                }
            }
        }

        if (u1 < budgets.d1) {
            std::set<std::pair<Component, Component>> merged;
            for (std::size_t i = 0; i < surface.component_count(); ++i)
                for (std::size_t j = i + 1; j < surface.component_count(); ++j) {
                    if (!merged.insert({surface.component(i), surface.component(j)}).second)
                        continue;
                    push(apply_d1(surface, OneHandle::merge(static_cast<int>(i),
                                                            static_cast<int>(j))),
                         OneHandle::merge(static_cast<int>(i), static_cast<int>(j)), u4, u2,
                         u1 + 1, used);
                }
            for (std::size_t i = 0; i < surface.component_count(); ++i) {
                if (i > 0 && surface.component(i) == surface.component(i - 1)) continue;
                push(apply_d1(surface, OneHandle::self_plain(static_cast<int>(i))),
                     OneHandle::self_plain(static_cast<int>(i)), u4, u2, u1 + 1, used);
            }
            for (std::size_t i = 0; i < surface.component_count(); ++i) {
                if (i > 0 && surface.component(i) == surface.component(i - 1)) continue;
                push(apply_d1(surface, OneHandle::self_twisted(static_cast<int>(i))),
                     OneHandle::self_twisted(static_cast<int>(i)), u4, u2, u1 + 1, used);
            }
        }
    }
    return false;
}

}  // namespace detail

/// Searches for a staged plan transforming `fa` into `fb` within the given
/// per-stage budgets. Deterministic: breadth-first by move count, canonical
/// expansion order, first plan found returned. Returns infeasible only on a
/// proof (necessary conditions or chi/stage accounting), unknown when the
/// budgets or the state allowance run out first.
inline SearchResult plan_search(const Surface& fa, const Surface& fb, const Budgets& budgets,
                                const SearchOptions& options = {}) {
    if (fa.empty() || fb.empty())
        throw std::invalid_argument("plan_search requires nonempty surfaces");
    if (budgets.d4 < 0 || budgets.d2 < 0 || budgets.d1 < 0)
        throw std::invalid_argument("budgets must be non-negative");

    SearchResult result;

    const Verdict verdict = check_class_m(fa, fb);
    if (!verdict.passed()) {
        result.status = SearchStatus::infeasible;
        result.reason = verdict.first_failed();
        return result;
    }

    if (budgets.d4 == 0 && budgets.d2 == 0 && budgets.d1 == 0) {
        if (fa != fb)
            throw std::invalid_argument("zero budgets admit no moves but the surfaces differ");
        result.status = SearchStatus::found;
        result.certificate = make_certificate(Plan{fa, {}, {}, {}});
        return result;
    }

    // Every d2 move raises chi by 2 and every d1 move lowers it by 2, so the
    // move counts must satisfy #d2 - #d1 = (chi(fb) - chi(fa)) / 2.
    const long long chi_diff = fb.euler() - fa.euler();
    if (chi_diff % 2 != 0 || chi_diff / 2 > budgets.d2 || -chi_diff / 2 > budgets.d1) {
        result.status = SearchStatus::infeasible;
        result.reason = "chi_accounting";
        return result;
    }

    try {
        const bool found = detail::bfs_plans(
            fa, budgets, options, &fb,
            [&](const std::vector<detail::SearchNode>& nodes, int index) {
                if (nodes[static_cast<std::size_t>(index)].surface != fb) return false;
                result.status = SearchStatus::found;
                result.certificate =
                    make_certificate(detail::reconstruct_plan(fa, nodes, index));
                return true;
            });
        if (!found) {
            result.status = SearchStatus::unknown;
            result.reason = "budgets_exhausted";
        }
    } catch (const budget_error&) {
        result.status = SearchStatus::unknown;
        result.reason = "state_limit";
    }
    return result;
}

/// Exhausts the budgets breadth-first and returns one certificate per
/// distinct reachable surface (the first, hence shortest, plan for each).
/// Throws budget_error when the state allowance is exceeded.
inline std::map<Surface, PlanCertificate> plan_search_all(const Surface& fa,
                                                          const Budgets& budgets,
                                                          const SearchOptions& options = {}) {
    if (fa.empty()) throw std::invalid_argument("plan_search_all requires a nonempty surface");
    if (budgets.d4 < 0 || budgets.d2 < 0 || budgets.d1 < 0)
        throw std::invalid_argument("budgets must be non-negative");

    std::map<Surface, PlanCertificate> out;
    detail::bfs_plans(fa, budgets, options, nullptr,
                      [&](const std::vector<detail::SearchNode>& nodes, int index) {
                          const Surface& s = nodes[static_cast<std::size_t>(index)].surface;
                          if (!out.contains(s))
                              out.emplace(s, make_certificate(detail::reconstruct_plan(
                                                 fa, nodes, index)));
                          return false;
                      });
    return out;
}

/// Builds the Theorem 2 plan for connected non-orientable F_a: p_prime
/// Mobius families on the start component, then one 2-handle on each created
/// Klein bottle, p/2 of them splitting into two projective planes and the
/// rest compressing to a sphere. In exact mode (p_prime = p/2) the trace ends
/// at F_a plus p projective planes; for larger p_prime the extra compressions
/// leave spheres behind and the certificate is flagged as discrepant from the
/// nominal target.
inline PlanCertificate construct_theorem2(const Surface& fa, int p, int p_prime) {
    if (fa.component_count() != 1)
        throw std::invalid_argument("construct_theorem2 requires a connected start surface");
    if (fa.component(0).is_orientable())
        throw std::invalid_argument("construct_theorem2 requires a non-orientable start surface");
    const long long capacity = fa.p();
    if (p < 1 || p % 2 != 0 || p > 2 * capacity)
        throw std::invalid_argument("p must be even with 1 <= p <= 2*P(start)");
    if (p_prime < p / 2 || p_prime > capacity)
        throw std::invalid_argument("p_prime must satisfy p/2 <= p_prime <= P(start)");

    Plan plan;
    plan.start = fa;
    Surface current = fa;
    for (int j = 0; j < p_prime; ++j) {
        plan.d4_moves.push_back(D4Family{0});
        current = apply_d4(current, fa.component(0));
    }
    for (int j = 0; j < p_prime; ++j) {
        const TwoHandleOutcome outcome =
            j < p / 2 ? TwoHandleOutcome::separating_split(Component::projective_plane(),
                                                           Component::projective_plane())
                      : TwoHandleOutcome::compress(Component::sphere());
        int index = -1;
        for (std::size_t i = 0; i < current.component_count(); ++i)
            if (current.component(i) == Component::klein_bottle()) {
                index = static_cast<int>(i);
                break;
            }
        plan.d2_moves.push_back(TwoHandle{index, outcome});
        current = apply_d2(current, index, outcome);
    }

    PlanCertificate cert = make_certificate(plan);
    Surface stated = fa;
    for (int j = 0; j < p; ++j) stated = stated.with_added(Component::projective_plane());
    cert.discrepancy = cert.trace.final_surface != stated;
    cert.stated_target = std::move(stated);
    return cert;
}

}  // namespace handleplan
