#pragma once

// Path sets of DET nodes and the variable-set recursions built on them.
//
// For a node <G, v> two kinds of paths are enumerated:
//   cycle paths    v -> ... -> v in the quotient of G, visiting v exactly
//                  twice and every other quotient vertex at most once;
//   through paths  simple paths of at least one edge in the subgraph induced
//                  by G, from an incoming to an outgoing boundary vertex.
// Arcs into and out of a component vertex carry their original effects;
// the component vertex itself contributes nothing.

#include "hsieve/decomposition.hpp"
#include "hsieve/fmp.hpp"
#include "hsieve/graph.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hsieve {

inline constexpr std::size_t kDefaultPathCap = 100000;

enum class PathKind { cycle, through };

struct PathSummary {
    const DetNode* node = nullptr;
    PathKind kind = PathKind::cycle;
    std::vector<std::string> vertices; // quotient vertices for cycles
    std::vector<std::string> edge_ids;
    EffectVector net;
    VarSet affected; // variables touched by at least one traversed edge
};

using VarFamily = std::set<VarSet>;

// { x \ b : x in a }. The empty set, once present, is never removed.
VarFamily boxminus(const VarFamily& a, const VarSet& b);

// Per-node facts gathered in a single pass over the node's own paths.
struct NodePathFacts {
    VarSet increased;      // net > 0 on some path
    VarSet zero_affected;  // touched and net == 0 on some path
    VarFamily decreased;   // one element per path: its net < 0 variables
    std::size_t path_count = 0;
};

using EffectTable = std::map<std::string, EffectVector, std::less<>>;

EffectTable effect_table(const Fmp& normalized);

// Analysis context for one (possibly pruned) policy graph. Quotients and
// per-node facts are cached by node address, so nodes must outlive the
// context and stay put while it is in use.
class PathContext {
public:
    PathContext(DiGraph graph, EffectTable effects, std::vector<std::string> var_names,
                 std::optional<std::string> q0, std::size_t path_cap = kDefaultPathCap);

    [[nodiscard]] const DiGraph& graph() const { return graph_; }
    [[nodiscard]] const EffectTable& effects() const { return effects_; }
    [[nodiscard]] const std::vector<std::string>& var_names() const { return var_names_; }
    [[nodiscard]] const std::optional<std::string>& q0() const { return q0_; }
    [[nodiscard]] std::size_t path_cap() const { return path_cap_; }

    [[nodiscard]] const QuotientGraph& quotient_of(const DetNode& node) const;
    [[nodiscard]] const NodePathFacts& facts(const DetNode& node) const;

private:
    DiGraph graph_;
    EffectTable effects_;
    std::vector<std::string> var_names_;
    std::optional<std::string> q0_;
    std::size_t path_cap_;
    mutable std::map<const DetNode*, std::unique_ptr<QuotientGraph>> quotients_;
    mutable std::map<const DetNode*, NodePathFacts> facts_;
};

// Context over a normalized policy's full graph.
PathContext make_path_context(const Fmp& normalized, std::size_t path_cap = kDefaultPathCap);

// All enumerations throw PathCapExceeded once a node yields more than
// ctx.path_cap() summaries, and Error("invalid-node") for a node whose
// vertex set is empty or lacks its elimination point.
std::vector<PathSummary> cycle_paths(const DetNode& node, const QuotientGraph& q, const PathContext& ctx);
std::vector<PathSummary> through_paths(const DetNode& node, const PathContext& ctx);
std::vector<PathSummary> node_paths(const DetNode& node, const QuotientGraph& q, const PathContext& ctx);

struct IncVars {
    VarSet iv;
    VarSet zv;
};

// IV and ZV of the subtree rooted at `node`.
IncVars build_inc_vars(const DetNode& node, const PathContext& ctx);

struct DecVars {
    VarFamily pdv;
    VarFamily dv;
};

// pDV collects the node's own per-path decrease sets and its children's DV;
// DV = pDV boxminus iv_effective.
DecVars build_dec_vars(const DetNode& node, const VarSet& iv_effective, const PathContext& ctx);

} // namespace hsieve
