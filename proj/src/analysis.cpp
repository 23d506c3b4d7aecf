#include "hsieve/analysis.hpp"

#include "hsieve/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

namespace hsieve {

std::string to_string(VerdictKind kind) {
    switch (kind) {
    case VerdictKind::terminating: return "terminating";
    case VerdictKind::unknown: return "unknown";
    case VerdictKind::nonterminating_qualitative: return "nonterminating_qualitative";
    }
    return "unknown";
}

std::uint64_t iteration_seed(std::uint64_t seed, std::size_t iteration) {
    return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(iteration);
}

namespace {

void require_analyzable(const Fmp& fmp) {
    require_valid(fmp);
    if (!fmp.is_normalized()) {
        throw InvalidPolicy("not-normalized", "policy has edges with zero or several actions; normalize it first");
    }
}

DiGraph graph_of(const Fmp& fmp, const std::vector<Edge>& edges) {
    std::vector<Arc> arcs;
    arcs.reserve(edges.size());
    for (const auto& e : edges) arcs.push_back({e.id, e.src, e.dst});
    return DiGraph(VertexSet(fmp.qstates.begin(), fmp.qstates.end()), std::move(arcs));
}

bool decreases_any(const EffectVector& effect, const VarSet& vars) {
    return std::any_of(vars.begin(), vars.end(), [&](const std::string& x) { return effect.get(x) < 0; });
}

VarSet union_of(const VarFamily& family) {
    VarSet out;
    for (const auto& s : family) out.insert(s.begin(), s.end());
    return out;
}

VarSet minus(VarSet a, const VarSet& b) {
    for (const auto& x : b) a.erase(x);
    return a;
}

// Fills the per-root variable sets of one iteration. Returns false when a
// path cap was hit.
bool compute_roots(const DefForest& forest, const PathContext& ctx, IvScope scope, IterationTrace& tr) {
    std::vector<IncVars> inc;
    try {
        for (const auto& tree : forest.trees) inc.push_back(build_inc_vars(tree, ctx));
    } catch (const PathCapExceeded&) {
        return false;
    }

    IncVars global;
    for (const auto& i : inc) {
        global.iv.insert(i.iv.begin(), i.iv.end());
        global.zv.insert(i.zv.begin(), i.zv.end());
    }

    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        const DetNode& tree = forest.trees[t];
        const IncVars& effective = scope == IvScope::global ? global : inc[t];
        DecVars dec = build_dec_vars(tree, effective.iv, ctx);

        RootTrace rt;
        rt.vertices = tree.vertices;
        rt.elim = tree.elim;
        rt.proven = !dec.dv.contains(VarSet{});
        rt.candidates = minus(minus(union_of(dec.pdv), effective.iv), effective.zv);
        rt.sets = NodeVarSets{inc[t].iv, inc[t].zv, std::move(dec.pdv), std::move(dec.dv)};

        tr.iv.insert(rt.sets.iv.begin(), rt.sets.iv.end());
        tr.zv.insert(rt.sets.zv.begin(), rt.sets.zv.end());
        tr.dv.insert(rt.sets.dv.begin(), rt.sets.dv.end());
        tr.roots.push_back(std::move(rt));
    }
    return true;
}

std::set<std::string> edges_to_remove(const std::vector<Edge>& edges, IvScope scope, IterationTrace& tr) {
    std::set<std::string> removed;
    if (scope == IvScope::global) {
        for (const auto& rt : tr.roots) tr.candidates.insert(rt.candidates.begin(), rt.candidates.end());
        for (const auto& e : edges) {
            if (decreases_any(e.effect(), tr.candidates)) removed.insert(e.id);
        }
        return removed;
    }
    for (const auto& rt : tr.roots) {
        if (rt.proven) continue;
        tr.candidates.insert(rt.candidates.begin(), rt.candidates.end());
        for (const auto& e : edges) {
            if (rt.vertices.contains(e.src) && rt.vertices.contains(e.dst) &&
                decreases_any(e.effect(), rt.candidates)) {
                removed.insert(e.id);
            }
        }
    }
    return removed;
}

} // namespace

AnalysisReport hsieve_once(const Fmp& fmp, std::uint64_t seed, const AnalysisConfig& config) {
    require_analyzable(fmp);
    const auto started = std::chrono::steady_clock::now();

    AnalysisReport report;
    report.config = config;
    report.seeds = {seed};

    const EffectTable effects = effect_table(fmp);
    const std::vector<std::string> vars = fmp.var_names();
    std::vector<Edge> current = fmp.edges;

    for (std::size_t iter = 0;; ++iter) {
        if (iter > fmp.edges.size()) {
            report.verdict = {VerdictKind::unknown, "iteration-cap"};
            break;
        }
        IterationTrace tr;
        tr.def_seed = iteration_seed(seed, iter);
        tr.edge_count = current.size();

        DiGraph graph = graph_of(fmp, current);
        DefForest forest = build_def(graph, tr.def_seed);
        if (forest.trees.empty()) {
            tr.forest = std::move(forest);
            report.iterations.push_back(std::move(tr));
            report.verdict = {VerdictKind::terminating, "acyclic"};
            break;
        }

        bool within_cap;
        {
            PathContext ctx(std::move(graph), effects, vars, fmp.q0, config.path_cap);
            within_cap = compute_roots(forest, ctx, config.iv_scope, tr);
        }
        tr.forest = std::move(forest);
        if (!within_cap) {
            report.iterations.push_back(std::move(tr));
            report.verdict = {VerdictKind::unknown, "resource-cap"};
            break;
        }

        bool all_proven = std::all_of(tr.roots.begin(), tr.roots.end(), [](const RootTrace& r) { return r.proven; });
        if (all_proven) {
            report.iterations.push_back(std::move(tr));
            report.verdict = {VerdictKind::terminating, "dv-nonempty"};
            break;
        }

        tr.removed_edges = edges_to_remove(current, config.iv_scope, tr);
        const bool stuck = tr.removed_edges.empty();
        std::erase_if(current, [&](const Edge& e) { return tr.removed_edges.contains(e.id); });
        report.iterations.push_back(std::move(tr));
        if (stuck) {
            report.verdict = {VerdictKind::unknown, "empty-set-persists"};
            break;
        }
    }

    report.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    return report;
}

AnalysisReport hsieve(const Fmp& fmp, const AnalysisConfig& config) {
    if (config.def_samples == 0) throw std::invalid_argument("def_samples must be at least 1");
    require_analyzable(fmp);
    const auto started = std::chrono::steady_clock::now();
    const std::size_t n = config.def_samples;

    auto finish = [&](AnalysisReport r, std::size_t tried, bool won) {
        r.config = config;
        r.seeds.clear();
        for (std::size_t k = 0; k < tried; ++k) r.seeds.push_back(config.base_seed + k);
        if (won) r.winning_sample = tried - 1;
        r.wall_time =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
        return r;
    };

    if (!config.parallel || n == 1) {
        AnalysisReport last;
        for (std::size_t k = 0; k < n; ++k) {
            last = hsieve_once(fmp, config.base_seed + k, config);
            if (last.verdict.kind == VerdictKind::terminating) return finish(std::move(last), k + 1, true);
        }
        return finish(std::move(last), n, false);
    }

    std::vector<std::optional<AnalysisReport>> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{n}; // lowest terminating index so far

    auto worker = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            if (k > best.load()) continue;
            try {
                AnalysisReport r = hsieve_once(fmp, config.base_seed + k, config);
                if (r.verdict.kind == VerdictKind::terminating) {
                    std::size_t cur = best.load();
                    while (k < cur && !best.compare_exchange_weak(cur, k)) {
                    }
                }
                results[k] = std::move(r);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    // Samples below `best` all ran; report exactly what a serial run would.
    const std::size_t stop = best.load();
    for (std::size_t k = 0; k <= std::min(stop, n - 1); ++k) {
        if (errors[k]) std::rethrow_exception(errors[k]);
    }
    if (stop < n) return finish(std::move(*results[stop]), stop + 1, true);
    return finish(std::move(*results[n - 1]), n, false);
}

namespace {

bool sieve_component(const DiGraph& g, const EffectTable& effects) {
    for (const auto& comp : scc_decompose(g).nontrivial()) {
        DiGraph sub = induced(g, comp);
        VarSet dec;
        VarSet inc;
        for (const auto& arc : sub.arcs()) {
            const EffectVector& e = effects.find(arc.id)->second;
            auto d = e.decreased();
            auto i = e.increased();
            dec.insert(d.begin(), d.end());
            inc.insert(i.begin(), i.end());
        }
        const VarSet progress = minus(dec, inc);

        std::vector<Arc> kept;
        for (const auto& arc : sub.arcs()) {
            if (!decreases_any(effects.find(arc.id)->second, progress)) kept.push_back(arc);
        }
        if (kept.size() == sub.arc_count()) return false;
        if (!sieve_component(DiGraph(comp, std::move(kept)), effects)) return false;
    }
    return true;
}

} // namespace

Verdict progress_sieve(const Fmp& fmp) {
    require_analyzable(fmp);
    DiGraph g = policy_graph(fmp);
    if (scc_decompose(g).nontrivial().empty()) return {VerdictKind::terminating, "acyclic"};
    if (sieve_component(g, effect_table(fmp))) return {VerdictKind::terminating, "progress-removal"};
    return {VerdictKind::nonterminating_qualitative, "no-progress-variable"};
}

} // namespace hsieve
