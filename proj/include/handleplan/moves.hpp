#pragma once

/**
 * @file moves.hpp
 * @brief Staged handle-move semantics on classified surfaces.
 *
 * A Plan rewrites a start surface F_a through three fixed stages:
 *
 *   1. D4 stage - Mobius-parametrized 1-handle families. Each move targets a
 *      non-orientable component of the original F_a, retains it unchanged and
 *      splits off a new Klein bottle. A component of F_a admits at most P of
 *      them (its Mobius capacity), and the chosen Mobius bands must be
 *      mutually disjoint, so the per-component counts are hard limits.
 *   2. D2 stage - 2-handles (surgery along a two-sided circle). Each move
 *      replaces one component by the outcome of a compression: split off a
 *      sphere, split into a nontrivial connected-sum pair, or compress to a
 *      simpler component. Every outcome raises chi by exactly 2 and never
 *      raises P.
 *   3. D1 stage - plain 1-handles (tubes). A tube either merges two
 *      components into their connected sum or adds a (possibly twisted)
 *      handle to one component. Every move lowers chi by exactly 2.
 *
 * The stage order is structural: a Plan cannot express interleavings, which
 * is what makes the invariant chain on traces sound.
 */

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "handleplan/surface.hpp"

namespace handleplan {

enum class MoveStage { d4, d2, d1 };

inline const char* stage_name(MoveStage s) {
    switch (s) {
        case MoveStage::d4: return "d4";
        case MoveStage::d2: return "d2";
        case MoveStage::d1: return "d1";
    }
    return "?";
}

/// Error raised by a single inapplicable move; carries a stable reason code.
class move_error : public error {
public:
    move_error(std::string code, const std::string& message)
        : error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// Result of one 2-handle move on a single component.
class TwoHandleOutcome {
public:
    enum class Kind { trivial_split, separating_split, compress };

    /// Split off a sphere: C -> C + S.
    static TwoHandleOutcome trivial_split() { return TwoHandleOutcome(Kind::trivial_split); }

    /// Split into a nontrivial connected-sum pair; stored unordered.
    static TwoHandleOutcome separating_split(const Component& a, const Component& b) {
        TwoHandleOutcome o(Kind::separating_split);
        o.first_ = std::min(a, b);
        o.second_ = std::max(a, b);
        return o;
    }

    /// Surgery along a two-sided non-separating circle: C -> result.
    static TwoHandleOutcome compress(const Component& result) {
        TwoHandleOutcome o(Kind::compress);
        o.first_ = result;
        return o;
    }

    Kind kind() const { return kind_; }
    const Component& left() const { return first_; }
    const Component& right() const { return second_; }
    const Component& result() const { return first_; }

    /// A split with a sphere part and the attached component as the other
    /// part is the same move as the trivial split; resolve the alias so both
    /// spellings validate and apply identically.
    TwoHandleOutcome normalized_for(const Component& target) const {
        if (kind_ == Kind::separating_split) {
            if (first_.is_sphere() && second_ == target) return trivial_split();
            if (second_.is_sphere() && first_ == target) return trivial_split();
        }
        return *this;
    }

    auto operator<=>(const TwoHandleOutcome&) const = default;

private:
    explicit TwoHandleOutcome(Kind kind) : kind_(kind) {}

    Kind kind_;
    Component first_;   // split: smaller part; compress: result
    Component second_;  // split: larger part
};

/// One Mobius-family move; the index refers to the original F_a components.
struct D4Family {
    int fa_component = 0;
    auto operator<=>(const D4Family&) const = default;
};

/// One 2-handle move; the index refers to the current surface in canonical
/// order at the moment the move applies.
struct TwoHandle {
    int component = 0;
    TwoHandleOutcome outcome = TwoHandleOutcome::trivial_split();
    auto operator<=>(const TwoHandle&) const = default;
};

/// One plain 1-handle move.
class OneHandle {
public:
    enum class Kind { merge, self_plain, self_twisted };

    static OneHandle merge(int i, int j) {
        OneHandle m(Kind::merge);
        m.first_ = std::min(i, j);
        m.second_ = std::max(i, j);
        return m;
    }
    static OneHandle self_plain(int component) {
        OneHandle m(Kind::self_plain);
        m.first_ = component;
        return m;
    }
    static OneHandle self_twisted(int component) {
        OneHandle m(Kind::self_twisted);
        m.first_ = component;
        return m;
    }

    Kind kind() const { return kind_; }
    int first() const { return first_; }
    int second() const { return second_; }
    int component() const { return first_; }

    auto operator<=>(const OneHandle&) const = default;

private:
    explicit OneHandle(Kind kind) : kind_(kind) {}

    Kind kind_;
    int first_ = 0;
    int second_ = -1;
};

/// Enumerates every 2-handle outcome realizable on component `c`:
///   - the trivial split, always;
///   - nontrivial separating splits (A, B) with A # B = c and neither part a
///     sphere: {O_a, O_{g-a}} for orientable genus g, {N_a, N_{k-a}} and
///     {O_g', N_{k-2g'}} for non-orientable genus k;
///   - compressions: O_g -> O_{g-1} (g >= 1); N_k -> N_{k-2} (k >= 3);
///     N_k -> O_{(k-2)/2} (k even).
/// On the projective plane every two-sided circle bounds a disk, so only the
/// trivial split remains. The list is sorted canonically.
inline std::vector<TwoHandleOutcome> enumerate_d2_outcomes(const Component& c) {
    std::vector<TwoHandleOutcome> out;
    out.push_back(TwoHandleOutcome::trivial_split());
    if (c.is_orientable()) {
        const int g = c.genus();
        for (int a = 1; a <= g / 2; ++a)
            out.push_back(TwoHandleOutcome::separating_split(Component::orientable(a),
                                                             Component::orientable(g - a)));
        if (g >= 1) out.push_back(TwoHandleOutcome::compress(Component::orientable(g - 1)));
    } else {
        const int k = c.genus();
        for (int a = 1; a <= k / 2; ++a)
            out.push_back(TwoHandleOutcome::separating_split(Component::non_orientable(a),
                                                             Component::non_orientable(k - a)));
        for (int g = 1; k - 2 * g >= 1; ++g)
            out.push_back(TwoHandleOutcome::separating_split(Component::orientable(g),
                                                             Component::non_orientable(k - 2 * g)));
        if (k >= 3) out.push_back(TwoHandleOutcome::compress(Component::non_orientable(k - 2)));
        if (k % 2 == 0) out.push_back(TwoHandleOutcome::compress(Component::orientable((k - 2) / 2)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Applies one Mobius-family move: the targeted F_a component must be
/// non-orientable; the current surface gains a Klein bottle.
/// Deltas, always: dP = +2, dP_o = 0, dchi = 0, dcomponents = +1.
inline Surface apply_d4(const Surface& current, const Component& fa_component) {
    if (fa_component.is_orientable())
        throw move_error("target_orientable",
                         "d4 target must be non-orientable (no Mobius band embeds in " +
                             format_component(fa_component) + ")");
    return current.with_added(Component::klein_bottle());
}

/// Applies one 2-handle move to the component at `component_index`.
/// The outcome must be enumerable for that component. dchi = +2 always.
inline Surface apply_d2(const Surface& current, int component_index,
                        const TwoHandleOutcome& outcome) {
    if (component_index < 0 ||
        static_cast<std::size_t>(component_index) >= current.component_count())
        throw move_error("index_out_of_range",
                         "d2 component index " + std::to_string(component_index) +
                             " out of range for a surface with " +
                             std::to_string(current.component_count()) + " components");
    const Component& c = current.component(static_cast<std::size_t>(component_index));
    const TwoHandleOutcome normalized = outcome.normalized_for(c);
    const auto menu = enumerate_d2_outcomes(c);
    if (std::find(menu.begin(), menu.end(), normalized) == menu.end())
        throw move_error("outcome_not_enumerable",
                         "d2 outcome is not realizable on component " + format_component(c));
    switch (normalized.kind()) {
        case TwoHandleOutcome::Kind::trivial_split:
            return current.with_replaced(static_cast<std::size_t>(component_index),
                                         {c, Component::sphere()});
        case TwoHandleOutcome::Kind::separating_split:
            return current.with_replaced(static_cast<std::size_t>(component_index),
                                         {normalized.left(), normalized.right()});
        case TwoHandleOutcome::Kind::compress:
            return current.with_replaced(static_cast<std::size_t>(component_index),
                                         {normalized.result()});
    }
    throw move_error("outcome_not_enumerable", "unreachable");
}

/// Applies one plain 1-handle move. dchi = -2 always; dP_o is 0 or -2.
inline Surface apply_d1(const Surface& current, const OneHandle& action) {
    const auto check_index = [&](int i) {
        if (i < 0 || static_cast<std::size_t>(i) >= current.component_count())
            throw move_error("index_out_of_range",
                             "d1 component index " + std::to_string(i) +
                                 " out of range for a surface with " +
                                 std::to_string(current.component_count()) + " components");
    };
    switch (action.kind()) {
        case OneHandle::Kind::merge: {
            check_index(action.first());
            check_index(action.second());
            if (action.first() == action.second())
                throw move_error("merge_same_component", "merge requires two distinct components");
            const Component a = current.component(static_cast<std::size_t>(action.first()));
            const Component b = current.component(static_cast<std::size_t>(action.second()));
            std::vector<Component> next;
            next.reserve(current.component_count() - 1);
            for (std::size_t i = 0; i < current.component_count(); ++i)
                if (static_cast<int>(i) != action.first() && static_cast<int>(i) != action.second())
                    next.push_back(current.component(i));
            next.push_back(connected_sum(a, b));
            return Surface(std::move(next));
        }
        case OneHandle::Kind::self_plain: {
            check_index(action.component());
            const Component c = current.component(static_cast<std::size_t>(action.component()));
            const Component result = c.is_orientable()
                                         ? Component::orientable(c.genus() + 1)
                                         : Component::non_orientable(c.genus() + 2);
            return current.with_replaced(static_cast<std::size_t>(action.component()), {result});
        }
        case OneHandle::Kind::self_twisted: {
            check_index(action.component());
            const Component c = current.component(static_cast<std::size_t>(action.component()));
            const Component result = c.is_orientable()
                                         ? Component::non_orientable(2 * c.genus() + 2)
                                         : Component::non_orientable(c.genus() + 2);
            return current.with_replaced(static_cast<std::size_t>(action.component()), {result});
        }
    }
    throw move_error("index_out_of_range", "unreachable");
}

/// A staged move list over a fixed start surface.
struct Plan {
    Surface start;
    std::vector<D4Family> d4_moves;
    std::vector<TwoHandle> d2_moves;
    std::vector<OneHandle> d1_moves;

    int total_moves() const {
        return static_cast<int>(d4_moves.size() + d2_moves.size() + d1_moves.size());
    }

    auto operator<=>(const Plan&) const = default;
};

/// Integer deltas of the tracked invariants across one move.
struct MoveDelta {
    long long p = 0;
    long long p_odd = 0;
    long long euler = 0;
    long long components = 0;

    bool operator==(const MoveDelta&) const = default;
};

inline MoveDelta delta_between(const Surface& before, const Surface& after) {
    return MoveDelta{after.p() - before.p(), after.p_odd() - before.p_odd(),
                     after.euler() - before.euler(),
                     static_cast<long long>(after.component_count()) -
                         static_cast<long long>(before.component_count())};
}

/// Full record of a plan application: every intermediate surface, the stage
/// snapshots and per-move invariant deltas.
struct Trace {
    std::vector<Surface> surfaces;  // [start, after move 1, ..., final]
    Surface after_d4;               // snapshot after the D4 stage
    Surface after_d2;               // snapshot after the D2 stage
    Surface final_surface;
    std::vector<MoveDelta> deltas;
};

/// Structured pass/fail verdict of plan validation. The first violation wins
/// and is identified by a machine-readable code plus the move position.
struct PlanValidation {
    bool ok = true;
    std::string code;
    std::string message;
    MoveStage stage = MoveStage::d4;
    int move_index = -1;

    static PlanValidation pass() { return PlanValidation{}; }
    static PlanValidation fail(MoveStage stage, int index, std::string code, std::string message) {
        return PlanValidation{false, std::move(code), std::move(message), stage, index};
    }

    explicit operator bool() const { return ok; }
};

/// Raised by apply_plan when a move fails; wraps the validation verdict.
class plan_error : public error {
public:
    explicit plan_error(const PlanValidation& verdict)
        : error(std::string(stage_name(verdict.stage)) + " move " +
                std::to_string(verdict.move_index) + ": " + verdict.message),
          verdict_(verdict) {}

    const PlanValidation& verdict() const { return verdict_; }

private:
    PlanValidation verdict_;
};

namespace detail {

// Single walk shared by validate_plan and apply_plan.
inline PlanValidation run_plan(const Plan& plan, Trace* trace) {
    Surface current = plan.start;
    if (trace) {
        *trace = Trace{};
        trace->surfaces.push_back(current);
    }
    const auto record = [&](const Surface& next) {
        if (trace) {
            trace->deltas.push_back(delta_between(current, next));
            trace->surfaces.push_back(next);
        }
        current = next;
    };

    std::vector<int> used(plan.start.component_count(), 0);
    for (std::size_t j = 0; j < plan.d4_moves.size(); ++j) {
        const int target = plan.d4_moves[j].fa_component;
        if (target < 0 || static_cast<std::size_t>(target) >= plan.start.component_count())
            return PlanValidation::fail(MoveStage::d4, static_cast<int>(j), "index_out_of_range",
                                        "d4 target " + std::to_string(target) +
                                            " out of range for the start surface");
        const Component& fa_component = plan.start.component(static_cast<std::size_t>(target));
        if (fa_component.is_orientable())
            return PlanValidation::fail(MoveStage::d4, static_cast<int>(j), "target_orientable",
                                        "d4 target " + format_component(fa_component) +
                                            " is orientable");
        if (used[static_cast<std::size_t>(target)] + 1 > fa_component.p())
            return PlanValidation::fail(
                MoveStage::d4, static_cast<int>(j), "capacity_exceeded",
                "capacity: " + std::to_string(used[static_cast<std::size_t>(target)] + 1) +
                    " > P = " + std::to_string(fa_component.p()) + " on component " +
                    format_component(fa_component));
        ++used[static_cast<std::size_t>(target)];
        record(apply_d4(current, fa_component));
    }
    if (trace) trace->after_d4 = current;

    for (std::size_t j = 0; j < plan.d2_moves.size(); ++j) {
        try {
            record(apply_d2(current, plan.d2_moves[j].component, plan.d2_moves[j].outcome));
        } catch (const move_error& e) {
            return PlanValidation::fail(MoveStage::d2, static_cast<int>(j), e.code(), e.what());
        }
    }
    if (trace) trace->after_d2 = current;

    for (std::size_t j = 0; j < plan.d1_moves.size(); ++j) {
        try {
            record(apply_d1(current, plan.d1_moves[j]));
        } catch (const move_error& e) {
            return PlanValidation::fail(MoveStage::d1, static_cast<int>(j), e.code(), e.what());
        }
    }
    if (trace) trace->final_surface = current;
    return PlanValidation::pass();
}

}  // namespace detail

/// Checks stage structure, D4 capacities against the start surface and every
/// outcome membership. Returns pass or the first violation.
inline PlanValidation validate_plan(const Plan& plan) {
    return detail::run_plan(plan, nullptr);
}

/// Applies the whole plan and returns the trace; throws plan_error carrying
/// the failing move's position if any move is inapplicable.
inline Trace apply_plan(const Plan& plan) {
    Trace trace;
    if (auto verdict = detail::run_plan(plan, &trace); !verdict) throw plan_error(verdict);
    return trace;
}

enum class Connectivity { connected, disconnected, unknown };

inline const char* connectivity_name(Connectivity c) {
    switch (c) {
        case Connectivity::connected: return "connected";
        case Connectivity::disconnected: return "disconnected";
        case Connectivity::unknown: return "unknown";
    }
    return "?";
}

/// Conservative connectivity check for the cobordism a plan describes.
///
/// The product pieces over the start components are joined only by merge
/// moves, so a union-find over start components answers connectivity:
/// provenance of every intermediate component is tracked (new Klein bottles
/// inherit the D4 target's class, split children copy the parent's class) and
/// merges union the classes they span. One final class means connected. With
/// several final classes and no merge ever spanning two classes the pieces
/// are provably separate; if cross-class merges did occur the answer is
/// reported as unknown rather than sharpened.
///
/// Components that compare equal are ordered by provenance class here, which
/// fixes the otherwise ambiguous choice of which equal component an index
/// denotes.
inline Connectivity manifold_connected(const Plan& plan) {
    if (auto verdict = validate_plan(plan); !verdict) throw plan_error(verdict);

    const std::size_t n = plan.start.component_count();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    struct Slot {
        Component component;
        std::size_t provenance;  // a start-component index in its class
        bool operator<(const Slot& other) const {
            if (component != other.component) return component < other.component;
            return provenance < other.provenance;
        }
    };
    std::vector<Slot> slots;
    slots.reserve(n);
    for (std::size_t i = 0; i < n; ++i) slots.push_back({plan.start.component(i), i});
    std::sort(slots.begin(), slots.end());

    bool cross_class_merge = false;

    for (const auto& move : plan.d4_moves) {
        slots.push_back({Component::klein_bottle(), static_cast<std::size_t>(move.fa_component)});
        std::sort(slots.begin(), slots.end());
    }
    for (const auto& move : plan.d2_moves) {
        Slot slot = slots[static_cast<std::size_t>(move.component)];
        const TwoHandleOutcome outcome = move.outcome.normalized_for(slot.component);
        slots.erase(slots.begin() + move.component);
        switch (outcome.kind()) {
            case TwoHandleOutcome::Kind::trivial_split:
                slots.push_back({slot.component, slot.provenance});
                slots.push_back({Component::sphere(), slot.provenance});
                break;
            case TwoHandleOutcome::Kind::separating_split:
                slots.push_back({outcome.left(), slot.provenance});
                slots.push_back({outcome.right(), slot.provenance});
                break;
            case TwoHandleOutcome::Kind::compress:
                slots.push_back({outcome.result(), slot.provenance});
                break;
        }
        std::sort(slots.begin(), slots.end());
    }
    for (const auto& move : plan.d1_moves) {
        switch (move.kind()) {
            case OneHandle::Kind::merge: {
                Slot a = slots[static_cast<std::size_t>(move.first())];
                Slot b = slots[static_cast<std::size_t>(move.second())];
                const std::size_t ra = find(a.provenance);
                const std::size_t rb = find(b.provenance);
                if (ra != rb) {
                    cross_class_merge = true;
                    parent[std::max(ra, rb)] = std::min(ra, rb);
                }
                slots.erase(slots.begin() + move.second());
                slots.erase(slots.begin() + move.first());
                slots.push_back({connected_sum(a.component, b.component), std::min(ra, rb)});
                break;
            }
            case OneHandle::Kind::self_plain:
            case OneHandle::Kind::self_twisted: {
                Slot slot = slots[static_cast<std::size_t>(move.component())];
                slots.erase(slots.begin() + move.component());
                Surface one({slot.component});
                slots.push_back({apply_d1(one, move.kind() == OneHandle::Kind::self_plain
                                                   ? OneHandle::self_plain(0)
                                                   : OneHandle::self_twisted(0))
                                     .component(0),
                                 slot.provenance});
                break;
            }
        }
        std::sort(slots.begin(), slots.end());
    }

    std::size_t classes = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (find(i) == i) ++classes;
    if (classes <= 1) return Connectivity::connected;
    if (!cross_class_merge) return Connectivity::disconnected;
    return Connectivity::unknown;
}

/// Per-stage move limits for searches and enumerations.
struct Budgets {
    int d4 = 0;
    int d2 = 0;
    int d1 = 0;

    bool operator==(const Budgets&) const = default;
};

}  // namespace handleplan
