#pragma once

/**
 * @file surface.hpp
 * @brief Classification algebra for closed surfaces.
 *
 * A closed connected surface is classified by orientability and genus:
 * orientable of genus g (sphere g=0, torus g=1, ...) or non-orientable of
 * genus k >= 1 (projective plane k=1, Klein bottle k=2, ...). A Surface is a
 * finite multiset of such components kept in a canonical order, which makes
 * equality, hashing and formatting deterministic.
 *
 * Invariants computed here:
 *   - euler characteristic: 2 - 2g (orientable), 2 - k (non-orientable)
 *   - P(component): 0 if orientable, k if non-orientable; additive over
 *     components
 *   - P_o(surface): number of components with odd P
 *   - mobius capacity: the maximal number of mutually disjoint embedded
 *     circles with Mobius-band neighborhoods, which equals P
 *
 * Text notation (the single wire format used by the CLI and all JSON
 * payloads): terms joined by "+", each term one of
 *   S (sphere), T (torus), P (projective plane), K (Klein bottle),
 *   O<g> (orientable, genus g >= 0), N<k> (non-orientable, genus k >= 1),
 * optionally prefixed by "<n>*" to repeat it. Examples: "S", "P + P",
 * "3*P", "T + N3". Whitespace between tokens is ignored.
 */

#include <algorithm>
#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace handleplan {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Surface-notation syntax error; carries the offending position.
class parse_error : public error {
public:
    parse_error(const std::string& msg, std::size_t position, std::string input)
        : error(msg + " (at position " + std::to_string(position) + ")"),
          position_(position),
          input_(std::move(input)) {}

    std::size_t position() const { return position_; }
    const std::string& input() const { return input_; }

private:
    std::size_t position_;
    std::string input_;
};

/// One closed connected surface, classified.
class Component {
public:
    /// Defaults to the sphere.
    Component() = default;

    static Component orientable(int genus) {
        if (genus < 0)
            throw std::invalid_argument("orientable genus must be >= 0");
        return Component(true, genus);
    }

    static Component non_orientable(int genus) {
        if (genus < 1)
            throw std::invalid_argument("non-orientable genus must be >= 1");
        return Component(false, genus);
    }

    static Component sphere() { return orientable(0); }
    static Component torus() { return orientable(1); }
    static Component projective_plane() { return non_orientable(1); }
    static Component klein_bottle() { return non_orientable(2); }

    bool is_orientable() const { return orientable_; }
    int genus() const { return genus_; }
    bool is_sphere() const { return orientable_ && genus_ == 0; }

    int euler() const { return orientable_ ? 2 - 2 * genus_ : 2 - genus_; }

    /// Non-orientable genus contribution: 0 for orientable components.
    int p() const { return orientable_ ? 0 : genus_; }

    /// Canonical order: orientable before non-orientable, then by genus.
    std::strong_ordering operator<=>(const Component& other) const {
        const int self_class = orientable_ ? 0 : 1;
        const int other_class = other.orientable_ ? 0 : 1;
        if (auto c = self_class <=> other_class; c != 0) return c;
        return genus_ <=> other.genus_;
    }
    bool operator==(const Component&) const = default;

private:
    Component(bool orientable, int genus) : orientable_(orientable), genus_(genus) {}

    bool orientable_ = true;
    int genus_ = 0;
};

/// Connected sum of two classified components. Orientable genera add; as soon
/// as one summand is non-orientable the result is non-orientable and each
/// torus summand contributes two cross-caps. Always chi(a#b) = chi(a)+chi(b)-2.
inline Component connected_sum(const Component& a, const Component& b) {
    if (a.is_orientable() && b.is_orientable())
        return Component::orientable(a.genus() + b.genus());
    const int from_orientable =
        2 * ((a.is_orientable() ? a.genus() : 0) + (b.is_orientable() ? b.genus() : 0));
    const int from_non_orientable =
        (a.is_orientable() ? 0 : a.genus()) + (b.is_orientable() ? 0 : b.genus());
    return Component::non_orientable(from_orientable + from_non_orientable);
}

/// A closed surface: multiset of components stored in canonical order.
/// Immutable after construction; the empty surface is a legal value used by
/// internal bookkeeping but rejected by the condition checkers.
class Surface {
public:
    Surface() = default;

    explicit Surface(std::vector<Component> components) : components_(std::move(components)) {
        std::sort(components_.begin(), components_.end());
    }

    Surface(std::initializer_list<Component> components)
        : Surface(std::vector<Component>(components)) {}

    const std::vector<Component>& components() const { return components_; }
    std::size_t component_count() const { return components_.size(); }
    bool empty() const { return components_.empty(); }

    const Component& component(std::size_t index) const { return components_.at(index); }

    long long p() const {
        long long total = 0;
        for (const auto& c : components_) total += c.p();
        return total;
    }

    long long p_odd() const {
        long long count = 0;
        for (const auto& c : components_)
            if (c.p() % 2 != 0) ++count;
        return count;
    }

    long long euler() const {
        long long total = 0;
        for (const auto& c : components_) total += c.euler();
        return total;
    }

    /// New surface with one extra component.
    Surface with_added(const Component& c) const {
        std::vector<Component> next = components_;
        next.push_back(c);
        return Surface(std::move(next));
    }

    /// New surface with the component at `index` replaced by `replacements`.
    Surface with_replaced(std::size_t index, const std::vector<Component>& replacements) const {
        if (index >= components_.size())
            throw std::out_of_range("component index out of range");
        std::vector<Component> next;
        next.reserve(components_.size() + replacements.size());
        for (std::size_t i = 0; i < components_.size(); ++i)
            if (i != index) next.push_back(components_[i]);
        next.insert(next.end(), replacements.begin(), replacements.end());
        return Surface(std::move(next));
    }

    /// Disjoint union.
    Surface disjoint_union(const Surface& other) const {
        std::vector<Component> next = components_;
        next.insert(next.end(), other.components_.begin(), other.components_.end());
        return Surface(std::move(next));
    }

    auto operator<=>(const Surface&) const = default;

private:
    std::vector<Component> components_;
};

inline long long p_invariant(const Surface& s) { return s.p(); }
inline long long p_odd(const Surface& s) { return s.p_odd(); }
inline long long euler_characteristic(const Surface& s) { return s.euler(); }

/// Maximal number of mutually disjoint embedded circles with Mobius-band
/// neighborhoods. Per component this is its non-orientable genus, so the
/// surface-level capacity coincides with P.
inline long long mobius_capacity(const Surface& s) { return s.p(); }

/// Explicit classification code: "O<g>" or "N<k>", never an alias.
inline std::string component_code(const Component& c) {
    return (c.is_orientable() ? "O" : "N") + std::to_string(c.genus());
}

/// Canonical notation term: aliases S/T/P/K for the four smallest surfaces,
/// codes O<g>/N<k> otherwise.
inline std::string format_component(const Component& c) {
    if (c.is_orientable()) {
        if (c.genus() == 0) return "S";
        if (c.genus() == 1) return "T";
    } else {
        if (c.genus() == 1) return "P";
        if (c.genus() == 2) return "K";
    }
    return component_code(c);
}

/// Canonical, deterministic notation; parse_surface inverts it.
/// The empty surface formats as the empty string (not parseable back).
inline std::string format_surface(const Surface& s) {
    std::string out;
    for (std::size_t i = 0; i < s.component_count(); ++i) {
        if (i > 0) out += " + ";
        out += format_component(s.component(i));
    }
    return out;
}

namespace detail {

// Hand-rolled scanner for the term grammar; kept tiny on purpose.
class SurfaceParser {
public:
    explicit SurfaceParser(std::string_view text) : text_(text) {}

    Surface parse() {
        std::vector<Component> components;
        skip_ws();
        if (at_end()) fail("expected a surface term");
        while (true) {
            parse_term(components);
            skip_ws();
            if (at_end()) break;
            if (peek() != '+') fail("expected '+' or end of input");
            ++pos_;
            skip_ws();
            if (at_end()) fail("expected a surface term after '+'");
        }
        return Surface(std::move(components));
    }

private:
    static constexpr long kMaxGenus = 1000000;
    static constexpr long kMaxRepeat = 100000;
    static constexpr std::size_t kMaxComponents = 100000;

    void parse_term(std::vector<Component>& components) {
        long repeat = 1;
        if (is_digit(peek())) {
            repeat = parse_number(kMaxRepeat, "repetition count");
            if (repeat < 1) fail("repetition count must be >= 1");
            skip_ws();
            if (at_end() || peek() != '*') fail("expected '*' after repetition count");
            ++pos_;
            skip_ws();
            if (at_end()) fail("expected a surface term after '*'");
        }
        Component c = parse_component_term();
        if (components.size() + static_cast<std::size_t>(repeat) > kMaxComponents)
            fail("too many components");
        for (long i = 0; i < repeat; ++i) components.push_back(c);
    }

    Component parse_component_term() {
        const char head = peek();
        ++pos_;
        switch (head) {
            case 'S': return Component::sphere();
            case 'T': return Component::torus();
            case 'P': return Component::projective_plane();
            case 'K': return Component::klein_bottle();
            case 'O': {
                if (at_end() || !is_digit(peek())) fail("'O' requires a genus, e.g. O2");
                return Component::orientable(static_cast<int>(parse_number(kMaxGenus, "genus")));
            }
            case 'N': {
                if (at_end() || !is_digit(peek())) fail("'N' requires a genus, e.g. N3");
                const std::size_t genus_pos = pos_;
                const long genus = parse_number(kMaxGenus, "genus");
                if (genus < 1) fail_at("non-orientable genus must be >= 1", genus_pos);
                return Component::non_orientable(static_cast<int>(genus));
            }
            default:
                --pos_;
                fail("expected one of S, T, P, K, O<g>, N<k>");
        }
        return Component::sphere();  // unreachable
    }

    long parse_number(long max, const char* what) {
        const std::size_t start = pos_;
        long value = 0;
        while (!at_end() && is_digit(peek())) {
            value = value * 10 + (peek() - '0');
            if (value > max) fail_at(std::string(what) + " too large", start);
            ++pos_;
        }
        return value;
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void skip_ws() {
        while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t where) const {
        throw parse_error(msg, where, std::string(text_));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses surface notation into a canonicalized Surface.
/// Throws parse_error (with position) on malformed input; "N0" is rejected.
inline Surface parse_surface(std::string_view text) {
    return detail::SurfaceParser(text).parse();
}

/// Parses a single-component term such as "P" or "O3".
inline Component parse_component(std::string_view text) {
    Surface s = parse_surface(text);
    if (s.component_count() != 1)
        throw parse_error("expected a single component", 0, std::string(text));
    return s.component(0);
}

}  // namespace handleplan
