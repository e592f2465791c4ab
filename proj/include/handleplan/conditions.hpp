#pragma once

/**
 * @file conditions.hpp
 * @brief Feasibility condition checkers for the staged cobordism problem.
 *
 * Theorem 1 of this project: if some class-M plan transforms F_a into F_b
 * then P_o(F_b) - P_o(F_a) is even, P_o(F_b) <= 3 P(F_a) and
 * P_o(F_a) <= 3 P(F_b). These are necessary conditions, so the class-M
 * checker never reports more than passes_necessary.
 *
 * In the Morse-function case (every stage consisting of single handles, one
 * critical point per singular value) the same three conditions with P in
 * place of 3P are necessary and sufficient, so the Morse checker reports
 * feasible on pass.
 */

#include <string>
#include <vector>

#include "handleplan/surface.hpp"

namespace handleplan {

enum class FeasibilityStatus { infeasible, passes_necessary, feasible };

inline const char* feasibility_status_name(FeasibilityStatus s) {
    switch (s) {
        case FeasibilityStatus::infeasible: return "infeasible";
        case FeasibilityStatus::passes_necessary: return "passes_necessary";
        case FeasibilityStatus::feasible: return "feasible";
    }
    return "?";
}

/// One evaluated condition: `left relation right`, e.g. "P_o(F_b)" "<=" 6.
struct ConditionCheck {
    std::string name;
    long long left = 0;
    std::string relation;
    long long right = 0;
    bool holds = false;

    bool operator==(const ConditionCheck&) const = default;
};

struct Verdict {
    FeasibilityStatus status = FeasibilityStatus::infeasible;
    std::vector<ConditionCheck> checks;

    bool passed() const { return status != FeasibilityStatus::infeasible; }

    /// Name of the first failing check, or "" when all hold.
    std::string first_failed() const {
        for (const auto& c : checks)
            if (!c.holds) return c.name;
        return "";
    }
};

namespace detail {

// Shared evaluator; multiplier 3 gives the class-M bounds, 1 the Morse ones.
inline Verdict check_conditions(const Surface& fa, const Surface& fb, long long multiplier,
                                FeasibilityStatus pass_status) {
    if (fa.empty() || fb.empty())
        throw std::invalid_argument("condition check requires nonempty surfaces");

    const long long pa = fa.p();
    const long long pb = fb.p();
    const long long poa = fa.p_odd();
    const long long pob = fb.p_odd();
    const std::string suffix = multiplier == 1 ? "pa" : "3pa";
    const std::string suffix_b = multiplier == 1 ? "pb" : "3pb";

    Verdict verdict;
    verdict.checks.push_back(
        {"parity", ((pob - poa) % 2 + 2) % 2, "==", 0, (pob - poa) % 2 == 0});
    verdict.checks.push_back({"po_b_le_" + suffix, pob, "<=", multiplier * pa, pob <= multiplier * pa});
    verdict.checks.push_back({"po_a_le_" + suffix_b, poa, "<=", multiplier * pb, poa <= multiplier * pb});

    bool all = true;
    for (const auto& c : verdict.checks) all = all && c.holds;
    verdict.status = all ? pass_status : FeasibilityStatus::infeasible;
    return verdict;
}

}  // namespace detail

/// Necessary conditions for any staged class-M plan from F_a to F_b:
/// parity of P_o difference, P_o(F_b) <= 3P(F_a), P_o(F_a) <= 3P(F_b).
/// All passing proves nothing more than "not excluded".
inline Verdict check_class_m(const Surface& fa, const Surface& fb) {
    return detail::check_conditions(fa, fb, 3, FeasibilityStatus::passes_necessary);
}

/// The Morse-function case: same checks with P in place of 3P; here the
/// conditions are also sufficient, so passing means feasible.
inline Verdict check_morse(const Surface& fa, const Surface& fb) {
    return detail::check_conditions(fa, fb, 1, FeasibilityStatus::feasible);
}

}  // namespace handleplan
