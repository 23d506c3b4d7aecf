#include "hsieve/workbench.hpp"

#include "hsieve/random.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hsieve {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string effect_label(const EffectVector& effect) {
    std::string out;
    for (const auto& [var, d] : effect.deltas()) {
        if (!out.empty()) out += ", ";
        out += var + (d > 0 ? "+" : "") + std::to_string(d);
    }
    return out;
}

std::string guard_label(const Guard& guard) {
    std::string out;
    for (const auto& [var, iv] : guard.conjuncts) {
        if (!out.empty()) out += ", ";
        out += iv.max ? std::to_string(iv.min) + "<=" + var + "<=" + std::to_string(*iv.max)
                      : var + ">=" + std::to_string(iv.min);
    }
    return out;
}

std::string set_label(const VertexSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& v : s) {
        if (!first) out += ", ";
        out += v;
        first = false;
    }
    return out + "}";
}

} // namespace

std::string export_dot(const Fmp& fmp) {
    std::ostringstream out;
    out << "digraph fmp {\n";
    for (const auto& q : fmp.qstates) {
        out << "  " << quoted(q);
        bool terminal = fmp.terminal && fmp.terminal->contains(q);
        if (q == fmp.q0 && terminal) {
            out << " [shape=doublecircle, style=bold]";
        } else if (q == fmp.q0) {
            out << " [style=bold]";
        } else if (terminal) {
            out << " [shape=doublecircle]";
        }
        out << ";\n";
    }
    for (const auto& e : fmp.edges) {
        std::string label;
        if (!e.guard.empty()) label = "[" + guard_label(e.guard) + "] ";
        for (std::size_t k = 0; k < e.actions.size(); ++k) {
            if (k > 0) label += " | ";
            label += effect_label(e.actions[k]);
        }
        out << "  " << quoted(e.src) << " -> " << quoted(e.dst) << " [id=" << quoted(e.id)
            << ", label=" << quoted(label) << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string export_def_dot(const DefForest& forest) {
    std::ostringstream out;
    out << "digraph def {\n";
    std::size_t next_id = 0;
    auto emit = [&](auto& self, const DetNode& node) -> std::size_t {
        const std::size_t id = next_id++;
        out << "  n" << id << " [label=" << quoted("(" + set_label(node.vertices) + ", " + node.elim + ")") << "];\n";
        for (const auto& child : node.children) {
            const std::size_t cid = self(self, child);
            out << "  n" << id << " -> n" << cid << ";\n";
        }
        return id;
    };
    for (const auto& tree : forest.trees) emit(emit, tree);
    out << "}\n";
    return out.str();
}

Fmp generate_random(const GenSpec& spec) {
    const std::size_t n = spec.n_qstates;
    if (n == 0 || spec.n_vars == 0 || spec.max_abs_delta < 1 || !(spec.edge_density > 0.0) ||
        spec.edge_density > 1.0) {
        throw std::invalid_argument("infeasible-spec: need qstates >= 1, vars >= 1, max delta >= 1, density in (0, 1]");
    }
    const auto edge_count = static_cast<std::size_t>(std::ceil(spec.edge_density * static_cast<double>(n * n) - 1e-9));
    if (edge_count + 1 < n) {
        throw std::invalid_argument("infeasible-spec: " + std::to_string(edge_count) +
                                    " edges cannot connect " + std::to_string(n) + " qstates");
    }

    Rng rng(spec.seed);
    Fmp fmp;
    for (std::size_t i = 0; i < spec.n_vars; ++i) fmp.vars.push_back({"x" + std::to_string(i), 0});
    for (std::size_t i = 0; i < n; ++i) fmp.qstates.push_back("q" + std::to_string(i));
    fmp.q0 = "q0";

    // Spanning arborescence from q0 in random attachment order.
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    std::vector<std::size_t> order;
    for (std::size_t i = 1; i < n; ++i) order.push_back(i);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    std::vector<std::size_t> connected{0};
    for (std::size_t v : order) {
        used[connected[uniform_index(rng, connected.size())]][v] = true;
        connected.push_back(v);
    }

    std::vector<std::pair<std::size_t, std::size_t>> free_pairs;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t d = 0; d < n; ++d) {
            if (!used[s][d]) free_pairs.emplace_back(s, d);
        }
    }
    for (std::size_t i = free_pairs.size(); i > 1; --i) std::swap(free_pairs[i - 1], free_pairs[uniform_index(rng, i)]);
    for (std::size_t k = 0; k < edge_count - (n - 1); ++k) used[free_pairs[k].first][free_pairs[k].second] = true;

    std::size_t next_id = 0;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t d = 0; d < n; ++d) {
            if (!used[s][d]) continue;
            EffectVector effect;
            const std::size_t touched = (spec.n_vars >= 2 && uniform_index(rng, 2) == 1) ? 2 : 1;
            std::size_t first = uniform_index(rng, spec.n_vars);
            for (std::size_t t = 0; t < touched; ++t) {
                std::size_t var = first;
                if (t == 1) {
                    var = uniform_index(rng, spec.n_vars - 1);
                    if (var >= first) ++var;
                }
                Value magnitude = uniform_int(rng, 1, spec.max_abs_delta);
                effect.set(fmp.vars[var].name, uniform_index(rng, 2) == 0 ? -magnitude : magnitude);
            }
            fmp.edges.push_back(Edge::simple("e" + std::to_string(next_id++), fmp.qstates[s], fmp.qstates[d], effect));
        }
    }
    return fmp;
}

namespace {

ordered_json strings(const std::set<std::string>& s) {
    return ordered_json(std::vector<std::string>(s.begin(), s.end()));
}

ordered_json family(const VarFamily& f) {
    ordered_json out = ordered_json::array();
    for (const auto& s : f) out.push_back(strings(s));
    return out;
}

ordered_json node_json(const DetNode& node) {
    ordered_json j;
    j["vertices"] = strings(node.vertices);
    j["elim"] = node.elim;
    ordered_json children = ordered_json::array();
    for (const auto& c : node.children) children.push_back(node_json(c));
    j["children"] = std::move(children);
    return j;
}

ordered_json config_json(const AnalysisConfig& c) {
    ordered_json j;
    j["def_samples"] = c.def_samples;
    j["base_seed"] = c.base_seed;
    j["path_cap"] = c.path_cap;
    j["iv_scope"] = c.iv_scope == IvScope::per_tree ? "per_tree" : "global";
    return j;
}

ordered_json configuration_json(const Configuration& c) {
    ordered_json j;
    j["qstate"] = c.qstate;
    ordered_json values = ordered_json::object();
    for (const auto& [var, v] : c.state.values) values[var] = v;
    j["state"] = std::move(values);
    return j;
}

} // namespace

ordered_json forest_to_json(const DefForest& forest) {
    ordered_json j;
    j["seed"] = forest.seed;
    ordered_json trees = ordered_json::array();
    for (const auto& t : forest.trees) trees.push_back(node_json(t));
    j["trees"] = std::move(trees);
    return j;
}

ordered_json report_to_json_stable(const AnalysisReport& report) {
    ordered_json j;
    j["verdict"] = to_string(report.verdict.kind);
    j["detail"] = report.verdict.detail;
    j["seeds"] = report.seeds;

    ordered_json iterations = ordered_json::array();
    for (const auto& it : report.iterations) {
        ordered_json ji;
        ji["def"] = forest_to_json(it.forest);
        ji["iv"] = strings(it.iv);
        ji["zv"] = strings(it.zv);
        ji["dv"] = family(it.dv);
        ji["candidates"] = strings(it.candidates);
        ji["removed_edges"] = strings(it.removed_edges);
        ji["edge_count"] = it.edge_count;
        ordered_json roots = ordered_json::array();
        for (const auto& r : it.roots) {
            ordered_json jr;
            jr["vertices"] = strings(r.vertices);
            jr["elim"] = r.elim;
            jr["iv"] = strings(r.sets.iv);
            jr["zv"] = strings(r.sets.zv);
            jr["pdv"] = family(r.sets.pdv);
            jr["dv"] = family(r.sets.dv);
            jr["proven"] = r.proven;
            jr["candidates"] = strings(r.candidates);
            roots.push_back(std::move(jr));
        }
        ji["roots"] = std::move(roots);
        iterations.push_back(std::move(ji));
    }
    j["iterations"] = std::move(iterations);
    j["config"] = config_json(report.config);
    j["winning_sample"] = report.winning_sample ? ordered_json(*report.winning_sample) : ordered_json(nullptr);
    return j;
}

ordered_json report_to_json(const AnalysisReport& report) {
    ordered_json stable = report_to_json_stable(report);
    ordered_json j;
    for (auto it = stable.begin(); it != stable.end(); ++it) {
        j[it.key()] = it.value();
        if (it.key() == "iterations") j["wall_ms"] = report.wall_time.count();
    }
    return j;
}

ordered_json explore_to_json(const ExploreResult& result) {
    ordered_json j;
    j["result"] = to_string(result.kind);
    ordered_json stats;
    stats["configs_expanded"] = result.stats.configs_expanded;
    stats["value_cap_hit"] = result.stats.value_cap_hit;
    stats["config_cap_hit"] = result.stats.config_cap_hit;
    stats["max_value"] = result.stats.max_value;
    j["stats"] = std::move(stats);
    if (result.witness) {
        ordered_json w;
        ordered_json path = ordered_json::array();
        for (const auto& c : result.witness->path) path.push_back(configuration_json(c));
        w["path"] = std::move(path);
        w["edges"] = result.witness->edges;
        w["cycle_start"] = result.witness->cycle_start;
        j["witness"] = std::move(w);
    }
    if (result.goal_report) {
        ordered_json g;
        g["halting_configs"] = result.goal_report->halting_configs;
        g["satisfying"] = result.goal_report->satisfying;
        g["fraction"] = result.goal_report->fraction();
        j["goal_report"] = std::move(g);
    }
    return j;
}

} // namespace hsieve
