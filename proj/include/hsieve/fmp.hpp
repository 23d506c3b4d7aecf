#pragma once

// Finite-memory policies over lower-bounded integer counters.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace hsieve {

using Value = std::int64_t;
using VarSet = std::set<std::string>;

struct VarDecl {
    std::string name;
    Value lower_bound = 0;

    bool operator==(const VarDecl&) const = default;
};

// Sparse per-variable integer deltas. Absent entries are zero and zero
// entries are never stored, so two vectors compare equal iff they act
// identically.
class EffectVector {
public:
    EffectVector() = default;
    EffectVector(std::initializer_list<std::pair<const std::string, Value>> deltas);

    [[nodiscard]] Value get(const std::string& var) const;
    void set(const std::string& var, Value delta);
    EffectVector& operator+=(const EffectVector& other);

    [[nodiscard]] bool affects(const std::string& var) const { return deltas_.contains(var); }
    [[nodiscard]] bool empty() const { return deltas_.empty(); }
    [[nodiscard]] const std::map<std::string, Value>& deltas() const { return deltas_; }

    // Variables with a strictly negative (positive) delta.
    [[nodiscard]] VarSet decreased() const;
    [[nodiscard]] VarSet increased() const;

    bool operator==(const EffectVector&) const = default;

private:
    std::map<std::string, Value> deltas_;
};

EffectVector operator+(EffectVector lhs, const EffectVector& rhs);

// Closed interval [min, max]; an absent max means unbounded above.
struct Interval {
    Value min = 0;
    std::optional<Value> max;

    [[nodiscard]] bool contains(Value v) const { return v >= min && (!max || v <= *max); }
    bool operator==(const Interval&) const = default;
};

struct ConcreteState {
    std::map<std::string, Value> values;

    [[nodiscard]] Value get(const std::string& var) const;
    bool operator==(const ConcreteState&) const = default;
    auto operator<=>(const ConcreteState&) const = default;
};

// Conjunction of per-variable interval conditions. Default lower-bound
// conditions are implicit and not stored here.
struct Guard {
    std::map<std::string, Interval> conjuncts;

    [[nodiscard]] bool empty() const { return conjuncts.empty(); }
    [[nodiscard]] bool satisfied_by(const ConcreteState& state) const;
    bool operator==(const Guard&) const = default;
};

// An edge of the policy multigraph. `actions` holds the alternative
// actions of the edge; a normalized policy has exactly one per edge.
struct Edge {
    std::string id;
    std::string src;
    std::string dst;
    Guard guard;
    std::vector<EffectVector> actions;
    std::string label;

    static Edge simple(std::string id, std::string src, std::string dst, EffectVector effect,
                       Guard guard = {}, std::string label = {});

    // The single action of a normalized edge. Throws std::logic_error if
    // the edge carries zero or several actions.
    [[nodiscard]] const EffectVector& effect() const;

    bool operator==(const Edge&) const = default;
};

struct Fmp {
    std::vector<VarDecl> vars;
    std::vector<std::string> qstates;
    std::string q0;
    std::vector<Edge> edges;
    std::optional<std::set<std::string>> terminal;
    std::optional<std::map<std::string, Interval>> goal;

    [[nodiscard]] const VarDecl* find_var(const std::string& name) const;
    [[nodiscard]] const Edge* find_edge(const std::string& id) const;
    [[nodiscard]] Value lower_bound(const std::string& var) const;
    [[nodiscard]] std::vector<std::string> var_names() const;
    [[nodiscard]] bool is_normalized() const;

    bool operator==(const Fmp&) const = default;
};

struct Violation {
    std::string code;
    std::string detail;

    bool operator==(const Violation&) const = default;
};

// Every invariant violation of `fmp`; empty iff the policy is valid.
std::vector<Violation> validate(const Fmp& fmp);

// Throws InvalidPolicy carrying the first violation when `fmp` is invalid.
void require_valid(const Fmp& fmp);

struct NormalizeLog {
    std::vector<std::string> entries;
};

// Splits multi-action edges into parallel single-action edges and drops
// edges with an empty action set. Split edges get ids "<id>#<k>" (k from 1).
// Throws InvalidPolicy on invalid input.
Fmp normalize(const Fmp& fmp, NormalizeLog* log = nullptr);

// Component-wise sum of the effects along a contiguous edge sequence.
// Throws std::invalid_argument when dst(i) != src(i+1).
EffectVector net_change(std::span<const Edge> path);

// True iff `state` satisfies the guard and the post-state respects every
// declared lower bound.
bool enabled(const Fmp& fmp, const Edge& edge, const ConcreteState& state);

// True iff every declared variable is present and at or above its bound,
// and no undeclared variable is present.
bool well_formed(const Fmp& fmp, const ConcreteState& state);

// Applies an effect. Callers check `enabled` first.
ConcreteState apply(const EffectVector& effect, ConcreteState state);

} // namespace hsieve
