#pragma once

// Directed multigraph utilities over string-named vertices.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hsieve {

struct Fmp;

using VertexSet = std::set<std::string>;

struct Arc {
    std::string id;
    std::string src;
    std::string dst;

    bool operator==(const Arc&) const = default;
};

// Immutable directed multigraph. Vertices are kept in sorted order and
// addressed either by name or by their index in that order. Arc indices
// follow the order the arcs were supplied in.
class DiGraph {
public:
    DiGraph() = default;

    // Throws std::invalid_argument on unknown endpoints or duplicate arc ids.
    DiGraph(VertexSet vertices, std::vector<Arc> arcs);

    [[nodiscard]] std::size_t vertex_count() const { return names_.size(); }
    [[nodiscard]] std::size_t arc_count() const { return arcs_.size(); }
    [[nodiscard]] const VertexSet& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
    [[nodiscard]] const std::vector<Arc>& arcs() const { return arcs_; }

    [[nodiscard]] bool has_vertex(const std::string& v) const { return vertices_.contains(v); }
    [[nodiscard]] std::optional<std::size_t> index_of(const std::string& v) const;
    [[nodiscard]] const std::string& name(std::size_t v) const { return names_[v]; }

    [[nodiscard]] std::size_t src(std::size_t arc) const { return ends_[arc].first; }
    [[nodiscard]] std::size_t dst(std::size_t arc) const { return ends_[arc].second; }
    [[nodiscard]] const std::vector<std::size_t>& out_arcs(std::size_t v) const { return out_[v]; }
    [[nodiscard]] const std::vector<std::size_t>& in_arcs(std::size_t v) const { return in_[v]; }
    [[nodiscard]] bool has_self_loop(std::size_t v) const;

    bool operator==(const DiGraph& other) const {
        return vertices_ == other.vertices_ && arcs_ == other.arcs_;
    }

private:
    VertexSet vertices_;
    std::vector<std::string> names_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::vector<Arc> arcs_;
    std::vector<std::pair<std::size_t, std::size_t>> ends_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
};

// The control-state graph of a policy: one arc per edge, ids preserved.
DiGraph policy_graph(const Fmp& fmp);

struct SccPartition {
    // Sorted by smallest member name.
    std::vector<VertexSet> components;
    std::vector<bool> trivial;

    [[nodiscard]] std::vector<VertexSet> nontrivial() const;
};

// Maximal strongly connected components. A component is nontrivial iff it
// has at least two vertices or a self-loop.
SccPartition scc_decompose(const DiGraph& g);

struct Boundary {
    VertexSet incoming;
    VertexSet outgoing;

    bool operator==(const Boundary&) const = default;
};

// Vertices of `h` entered from (left towards) vertices outside `h`. When
// `q0` is given and lies in `h` it is added to the incoming set.
Boundary boundary(const DiGraph& g_full, const VertexSet& h, const std::optional<std::string>& q0 = {});

DiGraph induced(const DiGraph& g, const VertexSet& h);

// Self-loops count as cycles.
bool is_acyclic(const DiGraph& g);

} // namespace hsieve
