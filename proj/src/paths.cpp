#include "hsieve/paths.hpp"

#include "hsieve/error.hpp"

#include <algorithm>

namespace hsieve {

VarFamily boxminus(const VarFamily& a, const VarSet& b) {
    VarFamily out;
    for (const auto& x : a) {
        VarSet diff;
        std::set_difference(x.begin(), x.end(), b.begin(), b.end(), std::inserter(diff, diff.end()));
        out.insert(std::move(diff));
    }
    return out;
}

EffectTable effect_table(const Fmp& normalized) {
    EffectTable table;
    for (const auto& e : normalized.edges) table.emplace(e.id, e.effect());
    return table;
}

PathContext::PathContext(DiGraph graph, EffectTable effects, std::vector<std::string> var_names,
                         std::optional<std::string> q0, std::size_t path_cap)
    : graph_(std::move(graph)), effects_(std::move(effects)), var_names_(std::move(var_names)),
      q0_(std::move(q0)), path_cap_(path_cap) {}

PathContext make_path_context(const Fmp& normalized, std::size_t path_cap) {
    return PathContext(policy_graph(normalized), effect_table(normalized), normalized.var_names(), normalized.q0,
                       path_cap);
}

const QuotientGraph& PathContext::quotient_of(const DetNode& node) const {
    auto it = quotients_.find(&node);
    if (it == quotients_.end()) {
        auto q = std::make_unique<QuotientGraph>(quotient(induced(graph_, node.vertices), node));
        it = quotients_.emplace(&node, std::move(q)).first;
    }
    return *it->second;
}

namespace {

void require_node(const DetNode& node) {
    if (node.vertices.empty() || !node.vertices.contains(node.elim)) {
        throw Error("invalid-node", "DET node has no vertices or its elimination point is not a member");
    }
}

// Dense per-arc effects of a graph whose arc ids name policy edges.
struct DenseArcs {
    std::vector<std::vector<Value>> delta;
    std::vector<std::vector<std::size_t>> touched; // variable indices with nonzero delta

    DenseArcs(const DiGraph& g, const PathContext& ctx) {
        const auto& vars = ctx.var_names();
        delta.assign(g.arc_count(), std::vector<Value>(vars.size(), 0));
        touched.resize(g.arc_count());
        for (std::size_t a = 0; a < g.arc_count(); ++a) {
            auto it = ctx.effects().find(g.arcs()[a].id);
            if (it == ctx.effects().end()) continue;
            for (std::size_t i = 0; i < vars.size(); ++i) {
                delta[a][i] = it->second.get(vars[i]);
                if (delta[a][i] != 0) touched[a].push_back(i);
            }
        }
    }
};

// Running state of one enumeration: the arc stack plus its net effect and
// per-variable touch counts, updated incrementally.
struct Walk {
    const DenseArcs& arcs;
    std::vector<std::size_t> stack;
    std::vector<Value> net;
    std::vector<int> touches;

    Walk(const DenseArcs& a, std::size_t nvars) : arcs(a), net(nvars, 0), touches(nvars, 0) {}

    void push(std::size_t arc) {
        stack.push_back(arc);
        for (std::size_t i : arcs.touched[arc]) {
            net[i] += arcs.delta[arc][i];
            ++touches[i];
        }
    }
    void pop() {
        std::size_t arc = stack.back();
        stack.pop_back();
        for (std::size_t i : arcs.touched[arc]) {
            net[i] -= arcs.delta[arc][i];
            --touches[i];
        }
    }
};

using Visit = std::function<void(const DiGraph&, std::size_t start, const Walk&)>;

class Counter {
public:
    explicit Counter(std::size_t cap) : cap_(cap) {}
    void tick() {
        if (++count_ > cap_) throw PathCapExceeded(cap_);
    }

private:
    std::size_t cap_;
    std::size_t count_ = 0;
};

void enumerate_cycles(const QuotientGraph& q, const DetNode& node, const PathContext& ctx, Counter& counter,
                      const Visit& visit) {
    const DiGraph& g = q.graph;
    auto elim = g.index_of(node.elim);
    if (!elim) throw Error("invalid-node", "elimination point missing from quotient");

    DenseArcs arcs(g, ctx);
    Walk walk(arcs, ctx.var_names().size());
    std::vector<bool> on_path(g.vertex_count(), false);
    on_path[*elim] = true;

    std::function<void(std::size_t)> extend = [&](std::size_t u) {
        for (std::size_t a : g.out_arcs(u)) {
            std::size_t w = g.dst(a);
            if (w == *elim) {
                walk.push(a);
                counter.tick();
                visit(g, *elim, walk);
                walk.pop();
            } else if (!on_path[w]) {
                on_path[w] = true;
                walk.push(a);
                extend(w);
                walk.pop();
                on_path[w] = false;
            }
        }
    };
    extend(*elim);
}

void enumerate_through(const DetNode& node, const PathContext& ctx, Counter& counter, const Visit& visit) {
    Boundary b = boundary(ctx.graph(), node.vertices, ctx.q0());
    if (b.incoming.empty() || b.outgoing.empty()) return;

    DiGraph g = induced(ctx.graph(), node.vertices);
    DenseArcs arcs(g, ctx);
    Walk walk(arcs, ctx.var_names().size());
    std::vector<bool> on_path(g.vertex_count(), false);
    std::vector<bool> is_out(g.vertex_count(), false);
    for (const auto& o : b.outgoing) is_out[*g.index_of(o)] = true;

    std::size_t start = 0;
    std::function<void(std::size_t)> extend = [&](std::size_t u) {
        for (std::size_t a : g.out_arcs(u)) {
            std::size_t w = g.dst(a);
            if (on_path[w]) continue;
            on_path[w] = true;
            walk.push(a);
            if (is_out[w]) {
                counter.tick();
                visit(g, start, walk);
            }
            extend(w);
            walk.pop();
            on_path[w] = false;
        }
    };
    for (const auto& i : b.incoming) {
        start = *g.index_of(i);
        on_path[start] = true;
        extend(start);
        on_path[start] = false;
    }
}

PathSummary summarize(const DetNode& node, PathKind kind, const DiGraph& g, std::size_t start, const Walk& walk,
                      const PathContext& ctx) {
    PathSummary s;
    s.node = &node;
    s.kind = kind;
    s.vertices.push_back(g.name(start));
    for (std::size_t a : walk.stack) {
        s.vertices.push_back(g.name(g.dst(a)));
        s.edge_ids.push_back(g.arcs()[a].id);
    }
    const auto& vars = ctx.var_names();
    for (std::size_t i = 0; i < vars.size(); ++i) {
        s.net.set(vars[i], walk.net[i]);
        if (walk.touches[i] > 0) s.affected.insert(vars[i]);
    }
    return s;
}

} // namespace

const NodePathFacts& PathContext::facts(const DetNode& node) const {
    if (auto it = facts_.find(&node); it != facts_.end()) return it->second;
    require_node(node);

    const std::size_t nvars = var_names_.size();
    NodePathFacts facts;
    std::vector<bool> increased(nvars, false);
    std::vector<bool> zero_affected(nvars, false);
    std::set<std::vector<bool>> decreased;

    Visit collect = [&](const DiGraph&, std::size_t, const Walk& walk) {
        ++facts.path_count;
        std::vector<bool> dec(nvars, false);
        for (std::size_t i = 0; i < nvars; ++i) {
            if (walk.net[i] > 0) increased[i] = true;
            if (walk.net[i] < 0) dec[i] = true;
            if (walk.net[i] == 0 && walk.touches[i] > 0) zero_affected[i] = true;
        }
        decreased.insert(std::move(dec));
    };

    Counter counter(path_cap_);
    enumerate_cycles(quotient_of(node), node, *this, counter, collect);
    enumerate_through(node, *this, counter, collect);

    for (std::size_t i = 0; i < nvars; ++i) {
        if (increased[i]) facts.increased.insert(var_names_[i]);
        if (zero_affected[i]) facts.zero_affected.insert(var_names_[i]);
    }
    for (const auto& mask : decreased) {
        VarSet set;
        for (std::size_t i = 0; i < nvars; ++i) {
            if (mask[i]) set.insert(var_names_[i]);
        }
        facts.decreased.insert(std::move(set));
    }
    return facts_.emplace(&node, std::move(facts)).first->second;
}

std::vector<PathSummary> cycle_paths(const DetNode& node, const QuotientGraph& q, const PathContext& ctx) {
    require_node(node);
    std::vector<PathSummary> out;
    Counter counter(ctx.path_cap());
    enumerate_cycles(q, node, ctx, counter, [&](const DiGraph& g, std::size_t start, const Walk& walk) {
        out.push_back(summarize(node, PathKind::cycle, g, start, walk, ctx));
    });
    return out;
}

std::vector<PathSummary> through_paths(const DetNode& node, const PathContext& ctx) {
    require_node(node);
    std::vector<PathSummary> out;
    Counter counter(ctx.path_cap());
    enumerate_through(node, ctx, counter, [&](const DiGraph& g, std::size_t start, const Walk& walk) {
        out.push_back(summarize(node, PathKind::through, g, start, walk, ctx));
    });
    return out;
}

std::vector<PathSummary> node_paths(const DetNode& node, const QuotientGraph& q, const PathContext& ctx) {
    require_node(node);
    std::vector<PathSummary> out;
    Counter counter(ctx.path_cap());
    enumerate_cycles(q, node, ctx, counter, [&](const DiGraph& g, std::size_t start, const Walk& walk) {
        out.push_back(summarize(node, PathKind::cycle, g, start, walk, ctx));
    });
    enumerate_through(node, ctx, counter, [&](const DiGraph& g, std::size_t start, const Walk& walk) {
        out.push_back(summarize(node, PathKind::through, g, start, walk, ctx));
    });
    return out;
}

IncVars build_inc_vars(const DetNode& node, const PathContext& ctx) {
    const NodePathFacts& own = ctx.facts(node);
    IncVars out{own.increased, own.zero_affected};
    for (const auto& child : node.children) {
        IncVars sub = build_inc_vars(child, ctx);
        out.iv.insert(sub.iv.begin(), sub.iv.end());
        out.zv.insert(sub.zv.begin(), sub.zv.end());
    }
    return out;
}

DecVars build_dec_vars(const DetNode& node, const VarSet& iv_effective, const PathContext& ctx) {
    DecVars out;
    out.pdv = ctx.facts(node).decreased;
    for (const auto& child : node.children) {
        DecVars sub = build_dec_vars(child, iv_effective, ctx);
        out.pdv.insert(sub.dv.begin(), sub.dv.end());
    }
    out.dv = boxminus(out.pdv, iv_effective);
    return out;
}

} // namespace hsieve
