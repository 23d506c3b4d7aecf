#pragma once

// Concrete interpreter under deterministic semantics and a bounded
// exhaustive explorer that certifies non-termination by finding lassos.

#include "hsieve/fmp.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hsieve {

struct Configuration {
    std::string qstate;
    ConcreteState state;

    bool operator==(const Configuration&) const = default;
};

struct Successor {
    std::string edge_id;
    Configuration next;
};

// One successor per enabled edge, in edge order. Empty iff `cfg` halts.
// Requires a normalized policy.
std::vector<Successor> step(const Fmp& fmp, const Configuration& cfg);

enum class ExploreKind { all_halt, lasso_found, inconclusive };

std::string to_string(ExploreKind kind);

struct ExploreCaps {
    std::size_t max_configs = 1'000'000;
    // Defaults to 64 * (largest initial value + largest |delta|).
    std::optional<Value> max_value;
};

// path[0] is the start configuration, path[i + 1] follows path[i] via
// edges[i], and path.back() == path[cycle_start].
struct LassoWitness {
    std::vector<Configuration> path;
    std::vector<std::string> edges;
    std::size_t cycle_start = 0;
};

struct ExploreStats {
    std::size_t configs_expanded = 0;
    bool value_cap_hit = false;
    bool config_cap_hit = false;
    Value max_value = 0;
};

struct GoalReport {
    std::size_t halting_configs = 0;
    std::size_t satisfying = 0;

    [[nodiscard]] double fraction() const {
        return halting_configs == 0 ? 1.0 : static_cast<double>(satisfying) / static_cast<double>(halting_configs);
    }
};

struct ExploreResult {
    ExploreKind kind = ExploreKind::inconclusive;
    std::optional<LassoWitness> witness;
    ExploreStats stats;
    std::optional<GoalReport> goal_report; // only for all_halt with a declared goal
};

// Depth-first search over configurations reachable from (q0, s0). A
// configuration repeated on the current path is a lasso, i.e. a genuine
// infinite execution. Without a lasso, any cap hit makes the result
// inconclusive.
ExploreResult explore(const Fmp& fmp, const ConcreteState& s0, const ExploreCaps& caps = {});

// True iff the witness replays through `step` from its first configuration.
bool replay_lasso(const Fmp& fmp, const LassoWitness& witness);

struct ExecutionStep {
    std::string edge_id;
    Configuration after;
};

struct Execution {
    Configuration start;
    std::vector<ExecutionStep> steps;
    bool halted = false;
};

// Random execution: each step picks uniformly among enabled edges.
Execution run_random(const Fmp& fmp, const ConcreteState& s0, std::size_t max_steps, std::uint64_t seed);

// True iff, at every qstate, no two outgoing edges can be enabled in the
// same state (guards intersected with the folded lower-bound conditions).
bool is_deterministic(const Fmp& fmp);

// Every state with each variable in [lower_bound, lower_bound + grid_max].
std::vector<ConcreteState> initial_grid(const Fmp& fmp, Value grid_max);

} // namespace hsieve
