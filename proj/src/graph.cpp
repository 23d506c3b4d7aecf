#include "hsieve/graph.hpp"

#include "hsieve/fmp.hpp"

#include <algorithm>
#include <stdexcept>

namespace hsieve {

DiGraph::DiGraph(VertexSet vertices, std::vector<Arc> arcs)
    : vertices_(std::move(vertices)), names_(vertices_.begin(), vertices_.end()), arcs_(std::move(arcs)) {
    for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], i);
    out_.resize(names_.size());
    in_.resize(names_.size());
    ends_.reserve(arcs_.size());

    std::set<std::string, std::less<>> ids;
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
        const Arc& arc = arcs_[a];
        if (!ids.insert(arc.id).second) {
            throw std::invalid_argument("duplicate arc id '" + arc.id + "'");
        }
        auto s = index_of(arc.src);
        auto d = index_of(arc.dst);
        if (!s || !d) {
            throw std::invalid_argument("arc '" + arc.id + "' has an endpoint outside the vertex set");
        }
        ends_.emplace_back(*s, *d);
        out_[*s].push_back(a);
        in_[*d].push_back(a);
    }
}

std::optional<std::size_t> DiGraph::index_of(const std::string& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool DiGraph::has_self_loop(std::size_t v) const {
    return std::any_of(out_[v].begin(), out_[v].end(), [&](std::size_t a) { return dst(a) == v; });
}

DiGraph policy_graph(const Fmp& fmp) {
    std::vector<Arc> arcs;
    arcs.reserve(fmp.edges.size());
    for (const auto& e : fmp.edges) arcs.push_back({e.id, e.src, e.dst});
    return DiGraph(VertexSet(fmp.qstates.begin(), fmp.qstates.end()), std::move(arcs));
}

std::vector<VertexSet> SccPartition::nontrivial() const {
    std::vector<VertexSet> out;
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (!trivial[i]) out.push_back(components[i]);
    }
    return out;
}

SccPartition scc_decompose(const DiGraph& g) {
    // Iterative Tarjan.
    const std::size_t n = g.vertex_count();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited);
    std::vector<std::size_t> low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> found;
    std::size_t counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next;
    };
    std::vector<Frame> call;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!call.empty()) {
            Frame& f = call.back();
            const auto& out = g.out_arcs(f.v);
            if (f.next < out.size()) {
                std::size_t w = g.dst(out[f.next++]);
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            std::size_t v = f.v;
            call.pop_back();
            if (!call.empty()) {
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                found.push_back(std::move(comp));
            }
        }
    }

    // Vertex indices follow name order, so the smallest index is the
    // smallest name.
    for (auto& comp : found) std::sort(comp.begin(), comp.end());
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

    SccPartition out;
    for (const auto& comp : found) {
        VertexSet names;
        for (std::size_t v : comp) names.insert(g.name(v));
        out.trivial.push_back(comp.size() == 1 && !g.has_self_loop(comp.front()));
        out.components.push_back(std::move(names));
    }
    return out;
}

namespace {

void require_subset(const DiGraph& g, const VertexSet& h) {
    for (const auto& v : h) {
        if (!g.has_vertex(v)) throw std::invalid_argument("vertex '" + v + "' is not in the graph");
    }
}

} // namespace

Boundary boundary(const DiGraph& g_full, const VertexSet& h, const std::optional<std::string>& q0) {
    require_subset(g_full, h);
    Boundary out;
    for (const auto& arc : g_full.arcs()) {
        bool src_in = h.contains(arc.src);
        bool dst_in = h.contains(arc.dst);
        if (!src_in && dst_in) out.incoming.insert(arc.dst);
        if (src_in && !dst_in) out.outgoing.insert(arc.src);
    }
    if (q0 && h.contains(*q0)) out.incoming.insert(*q0);
    return out;
}

DiGraph induced(const DiGraph& g, const VertexSet& h) {
    require_subset(g, h);
    std::vector<Arc> arcs;
    for (const auto& arc : g.arcs()) {
        if (h.contains(arc.src) && h.contains(arc.dst)) arcs.push_back(arc);
    }
    return DiGraph(h, std::move(arcs));
}

bool is_acyclic(const DiGraph& g) {
    // Kahn's algorithm: acyclic iff every vertex can be peeled off.
    std::vector<std::size_t> indegree(g.vertex_count(), 0);
    for (std::size_t a = 0; a < g.arc_count(); ++a) ++indegree[g.dst(a)];
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (indegree[v] == 0) ready.push_back(v);
    }
    std::size_t peeled = 0;
    while (!ready.empty()) {
        std::size_t v = ready.back();
        ready.pop_back();
        ++peeled;
        for (std::size_t a : g.out_arcs(v)) {
            if (--indegree[g.dst(a)] == 0) ready.push_back(g.dst(a));
        }
    }
    return peeled == g.vertex_count();
}

} // namespace hsieve
