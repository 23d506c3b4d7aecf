#include "hsieve/decomposition.hpp"

#include "hsieve/random.hpp"

#include <algorithm>
#include <stdexcept>

namespace hsieve {

namespace {

DetNode build_node(const DiGraph& g, const VertexSet& members, Rng& rng) {
    std::vector<std::string> ordered(members.begin(), members.end());
    DetNode node{members, ordered[uniform_index(rng, ordered.size())], {}};

    VertexSet rest = members;
    rest.erase(node.elim);
    for (const auto& child : scc_decompose(induced(g, rest)).nontrivial()) {
        node.children.push_back(build_node(g, child, rng));
    }
    return node;
}

void count_nodes(const DetNode& node, std::size_t& n) {
    ++n;
    for (const auto& c : node.children) count_nodes(c, n);
}

} // namespace

DefForest build_def(const DiGraph& g, std::uint64_t seed) {
    Rng rng(seed);
    DefForest forest;
    forest.seed = seed;
    for (const auto& comp : scc_decompose(g).nontrivial()) {
        forest.trees.push_back(build_node(g, comp, rng));
    }
    return forest;
}

std::size_t height(const DetNode& node) {
    std::size_t h = 0;
    for (const auto& c : node.children) h = std::max(h, height(c));
    return h + 1;
}

std::size_t node_count(const DefForest& forest) {
    std::size_t n = 0;
    for (const auto& t : forest.trees) count_nodes(t, n);
    return n;
}

std::string component_vertex_name(const VertexSet& members) {
    std::string name = "c:";
    bool first = true;
    for (const auto& m : members) {
        if (!first) name += '_';
        name += m;
        first = false;
    }
    return name;
}

QuotientGraph quotient(const DiGraph& g_h, const DetNode& node) {
    if (g_h.vertices() != node.vertices) {
        throw std::invalid_argument("quotient: graph does not span the DET node's vertex set");
    }

    QuotientGraph q;
    std::map<std::string, std::string> owner; // member -> component vertex
    for (const auto& child : node.children) {
        std::string cname = component_vertex_name(child.vertices);
        for (const auto& m : child.vertices) owner[m] = cname;
        q.component_map.emplace(cname, child.vertices);
    }

    VertexSet vertices;
    for (const auto& v : node.vertices) {
        if (!owner.contains(v)) vertices.insert(v);
    }
    for (const auto& [cname, members] : q.component_map) {
        if (!vertices.insert(cname).second) {
            throw std::invalid_argument("quotient: component vertex '" + cname + "' collides with a qstate");
        }
    }

    auto image = [&](const std::string& v) -> const std::string& {
        auto it = owner.find(v);
        return it == owner.end() ? v : it->second;
    };

    std::vector<Arc> arcs;
    for (const auto& arc : g_h.arcs()) {
        const std::string& s = image(arc.src);
        const std::string& d = image(arc.dst);
        if (s == d && q.component_map.contains(s)) continue; // internal to a child
        arcs.push_back({arc.id, s, d});
    }
    q.graph = DiGraph(std::move(vertices), std::move(arcs));
    return q;
}

namespace {

void check_node(const DetNode& node, const DiGraph& g, std::set<VertexSet>& seen, std::vector<Violation>& out) {
    const std::string where = component_vertex_name(node.vertices);
    if (!seen.insert(node.vertices).second) {
        out.push_back({"duplicate-vertex-set", where});
    }
    if (!node.vertices.contains(node.elim)) {
        out.push_back({"elim-not-member", where + " elim '" + node.elim + "'"});
        return;
    }

    VertexSet rest = node.vertices;
    rest.erase(node.elim);
    auto expected = scc_decompose(induced(g, rest)).nontrivial();
    std::vector<VertexSet> actual;
    for (const auto& c : node.children) actual.push_back(c.vertices);
    std::sort(actual.begin(), actual.end());
    std::sort(expected.begin(), expected.end());
    if (actual != expected) {
        out.push_back({"children-mismatch", where});
        return;
    }

    auto q = quotient(induced(g, node.vertices), node);
    VertexSet without_elim = q.graph.vertices();
    without_elim.erase(node.elim);
    if (!is_acyclic(induced(q.graph, without_elim))) {
        out.push_back({"quotient-cyclic", where});
    }

    for (const auto& c : node.children) check_node(c, g, seen, out);
}

} // namespace

std::vector<Violation> check_det(const DefForest& forest, const DiGraph& g) {
    std::vector<Violation> out;

    auto expected = scc_decompose(g).nontrivial();
    std::vector<VertexSet> roots;
    for (const auto& t : forest.trees) roots.push_back(t.vertices);
    std::sort(roots.begin(), roots.end());
    std::sort(expected.begin(), expected.end());
    if (roots != expected) {
        out.push_back({"root-mismatch", "tree roots are not the nontrivial SCCs of the graph"});
        return out;
    }

    for (const auto& t : forest.trees) {
        std::set<VertexSet> seen;
        check_node(t, g, seen, out);
    }
    return out;
}

} // namespace hsieve
