#pragma once

// Termination analysis: the hierarchical sieve with iterative edge removal,
// multi-DEF sampling on top of it, and the Progress-Sieve baseline.

#include "hsieve/decomposition.hpp"
#include "hsieve/fmp.hpp"
#include "hsieve/paths.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hsieve {

enum class VerdictKind { terminating, unknown, nonterminating_qualitative };

std::string to_string(VerdictKind kind);

struct Verdict {
    VerdictKind kind = VerdictKind::unknown;
    std::string detail; // acyclic, dv-nonempty, empty-set-persists, resource-cap, no-progress-variable, ...

    bool operator==(const Verdict&) const = default;
};

// Which paths a variable's increase or affected-zero change is measured
// over when building removal candidates and the IV used inside DV.
enum class IvScope {
    per_tree, // each nontrivial SCC of the policy on its own
    global,   // one union over every tree of the forest
};

struct AnalysisConfig {
    std::size_t def_samples = 1;
    std::uint64_t base_seed = 0;
    std::size_t path_cap = kDefaultPathCap;
    IvScope iv_scope = IvScope::per_tree;
    bool parallel = false;

    bool operator==(const AnalysisConfig&) const = default;
};

struct NodeVarSets {
    VarSet iv;
    VarSet zv;
    VarFamily pdv;
    VarFamily dv;

    bool operator==(const NodeVarSets&) const = default;
};

struct RootTrace {
    VertexSet vertices;
    std::string elim;
    NodeVarSets sets;
    bool proven = false; // no empty set in DV
    VarSet candidates;

    bool operator==(const RootTrace&) const = default;
};

struct IterationTrace {
    std::uint64_t def_seed = 0;
    std::size_t edge_count = 0; // edges of the graph analyzed in this iteration
    DefForest forest;
    std::vector<RootTrace> roots;
    // Unions over the roots, as written to trace files.
    VarSet iv;
    VarSet zv;
    VarFamily dv;
    VarSet candidates;
    std::set<std::string> removed_edges;

    bool operator==(const IterationTrace&) const = default;
};

struct AnalysisReport {
    Verdict verdict;
    std::vector<IterationTrace> iterations;
    std::vector<std::uint64_t> seeds; // DEF sample seeds tried, in order
    std::optional<std::size_t> winning_sample;
    std::chrono::milliseconds wall_time{0};
    AnalysisConfig config;
};

// Seed of the DEF built in iteration `iteration` of a run seeded with `seed`.
std::uint64_t iteration_seed(std::uint64_t seed, std::size_t iteration);

// One run of the main loop with a single seed stream. Requires a valid,
// normalized policy (throws InvalidPolicy otherwise). Path-cap overruns end
// the run with unknown(resource-cap).
AnalysisReport hsieve_once(const Fmp& fmp, std::uint64_t seed, const AnalysisConfig& config = {});

// Runs hsieve_once with seeds base_seed, base_seed + 1, ... up to
// def_samples times and returns the lowest-index terminating report, else
// the report of the last sample. `seeds` lists every seed tried; a parallel
// run reports the same seeds and verdict as a serial one.
AnalysisReport hsieve(const Fmp& fmp, const AnalysisConfig& config = {});

// Progress-Sieve: inside every nontrivial SCC, a progress variable is one
// decreased by some edge of the SCC and increased by none. Requires a valid,
// normalized policy.
Verdict progress_sieve(const Fmp& fmp);

} // namespace hsieve
