#pragma once

// Directed elimination forests and quotient graphs.
//
// A DET node <H, v> pairs a strongly connected vertex set H with an
// elimination point v in H. Its children are exactly the nontrivial SCCs of
// the subgraph induced by H without v, each again decomposed. A forest holds
// one tree per nontrivial SCC of the input graph.

#include "hsieve/fmp.hpp"
#include "hsieve/graph.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hsieve {

struct DetNode {
    VertexSet vertices;
    std::string elim;
    std::vector<DetNode> children; // ordered by smallest member name

    bool operator==(const DetNode&) const = default;
};

struct DefForest {
    std::vector<DetNode> trees; // ordered by smallest member name
    std::uint64_t seed = 0;

    bool operator==(const DefForest&) const = default;
};

// Elimination points are drawn uniformly from each component with a
// generator seeded by `seed`; equal (graph, seed) pairs give equal forests.
DefForest build_def(const DiGraph& g, std::uint64_t seed);

std::size_t height(const DetNode& node);
std::size_t node_count(const DefForest& forest);

// "c:" followed by the member names joined with '_'.
std::string component_vertex_name(const VertexSet& members);

struct QuotientGraph {
    DiGraph graph;
    std::map<std::string, VertexSet> component_map; // component vertex -> members

    [[nodiscard]] bool is_component(const std::string& v) const { return component_map.contains(v); }
};

// Collapses every child of `node` into a component vertex. Arcs internal to
// a child are dropped; all other arcs keep their ids. Throws
// std::invalid_argument when `g_h` does not span exactly node.vertices.
QuotientGraph quotient(const DiGraph& g_h, const DetNode& node);

// Checks every DET clause for each tree of `forest` against `g`, plus
// acyclicity of each quotient once the elimination point is removed.
// Violation codes: root-mismatch, elim-not-member, duplicate-vertex-set,
// children-mismatch, quotient-cyclic.
std::vector<Violation> check_det(const DefForest& forest, const DiGraph& g);

} // namespace hsieve
