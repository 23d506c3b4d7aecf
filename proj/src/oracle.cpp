#include "hsieve/oracle.hpp"

#include "hsieve/random.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace hsieve {

std::string to_string(ExploreKind kind) {
    switch (kind) {
    case ExploreKind::all_halt: return "all_halt";
    case ExploreKind::lasso_found: return "lasso_found";
    case ExploreKind::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::vector<Successor> step(const Fmp& fmp, const Configuration& cfg) {
    std::vector<Successor> out;
    for (const auto& e : fmp.edges) {
        if (e.src != cfg.qstate || !enabled(fmp, e, cfg.state)) continue;
        out.push_back({e.id, {e.dst, apply(e.effect(), cfg.state)}});
    }
    return out;
}

namespace {

// Dense form of a policy for the explorer. A configuration is a vector
// whose first slot is the qstate index and the rest are variable values in
// declaration order.
struct Compiled {
    struct Conjunct {
        std::size_t var;
        Interval range;
    };
    struct CEdge {
        std::string id;
        std::size_t dst;
        std::vector<Conjunct> guard;
        std::vector<Value> delta;
    };

    std::vector<std::string> vars;
    std::vector<Value> lower;
    std::vector<std::string> qnames;
    std::vector<std::vector<CEdge>> out;
    std::size_t q0 = 0;

    explicit Compiled(const Fmp& fmp) {
        std::map<std::string, std::size_t> var_index;
        for (const auto& v : fmp.vars) {
            var_index[v.name] = vars.size();
            vars.push_back(v.name);
            lower.push_back(v.lower_bound);
        }
        std::map<std::string, std::size_t> q_index;
        for (const auto& q : fmp.qstates) {
            q_index[q] = qnames.size();
            qnames.push_back(q);
        }
        q0 = q_index.at(fmp.q0);
        out.resize(qnames.size());
        for (const auto& e : fmp.edges) {
            CEdge ce{e.id, q_index.at(e.dst), {}, std::vector<Value>(vars.size(), 0)};
            for (const auto& [var, range] : e.guard.conjuncts) ce.guard.push_back({var_index.at(var), range});
            for (const auto& [var, d] : e.effect().deltas()) ce.delta[var_index.at(var)] = d;
            out[q_index.at(e.src)].push_back(std::move(ce));
        }
    }

    // `cfg` includes the leading qstate slot.
    [[nodiscard]] bool enabled(const CEdge& e, const std::vector<Value>& cfg) const {
        for (const auto& c : e.guard) {
            if (!c.range.contains(cfg[c.var + 1])) return false;
        }
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (cfg[i + 1] + e.delta[i] < lower[i]) return false;
        }
        return true;
    }

    [[nodiscard]] Configuration decode(const std::vector<Value>& cfg) const {
        Configuration c{qnames[static_cast<std::size_t>(cfg[0])], {}};
        for (std::size_t i = 0; i < vars.size(); ++i) c.state.values[vars[i]] = cfg[i + 1];
        return c;
    }
};

struct KeyHash {
    std::size_t operator()(const std::vector<Value>& k) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (Value v : k) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

Value default_max_value(const Fmp& fmp, const ConcreteState& s0) {
    Value max_init = 0;
    for (const auto& [var, v] : s0.values) max_init = std::max(max_init, std::abs(v));
    Value max_delta = 0;
    for (const auto& e : fmp.edges) {
        for (const auto& a : e.actions) {
            for (const auto& [var, d] : a.deltas()) max_delta = std::max(max_delta, std::abs(d));
        }
    }
    return 64 * (max_init + max_delta);
}

bool goal_holds(const Fmp& fmp, const Configuration& c) {
    for (const auto& [var, range] : *fmp.goal) {
        if (!range.contains(c.state.get(var))) return false;
    }
    return true;
}

} // namespace

ExploreResult explore(const Fmp& fmp, const ConcreteState& s0, const ExploreCaps& caps) {
    if (!well_formed(fmp, s0)) throw std::invalid_argument("explore: initial state is not well formed");
    const Compiled policy(fmp);
    const Value max_value = caps.max_value.value_or(default_max_value(fmp, s0));

    ExploreResult result;
    result.stats.max_value = max_value;
    if (fmp.goal) result.goal_report = GoalReport{};

    std::vector<Value> start{static_cast<Value>(policy.q0)};
    for (const auto& v : policy.vars) start.push_back(s0.get(v));
    for (std::size_t i = 1; i < start.size(); ++i) {
        if (start[i] > max_value) {
            result.stats.value_cap_hit = true;
            result.goal_report.reset();
            return result;
        }
    }

    // Value >= 0: position on the DFS stack (gray). -1: fully explored.
    constexpr std::int64_t black = -1;
    std::unordered_map<std::vector<Value>, std::int64_t, KeyHash> seen;

    struct Frame {
        std::vector<Value> cfg;
        std::size_t next = 0;
        bool any_enabled = false;
        std::size_t via = 0; // edge index (in the parent's list) used to get here
    };
    std::vector<Frame> stack;

    seen.emplace(start, 0);
    stack.push_back({start, 0, false, 0});
    result.stats.configs_expanded = 1;

    std::vector<Value> succ;
    while (!stack.empty()) {
        Frame& top = stack.back();
        const auto& edges = policy.out[static_cast<std::size_t>(top.cfg[0])];
        if (top.next == edges.size()) {
            if (!top.any_enabled && result.goal_report) {
                ++result.goal_report->halting_configs;
                if (goal_holds(fmp, policy.decode(top.cfg))) ++result.goal_report->satisfying;
            }
            seen[top.cfg] = black;
            stack.pop_back();
            continue;
        }

        const std::size_t ei = top.next++;
        const auto& e = edges[ei];
        if (!policy.enabled(e, top.cfg)) continue;
        top.any_enabled = true;

        succ = top.cfg;
        succ[0] = static_cast<Value>(e.dst);
        bool over = false;
        for (std::size_t i = 0; i < policy.vars.size(); ++i) {
            succ[i + 1] += e.delta[i];
            over = over || succ[i + 1] > max_value;
        }
        if (over) {
            result.stats.value_cap_hit = true;
            continue;
        }

        auto it = seen.find(succ);
        if (it != seen.end()) {
            if (it->second == black) continue;
            // Back edge: the configuration is on the current path.
            LassoWitness w;
            w.cycle_start = static_cast<std::size_t>(it->second);
            for (std::size_t i = 0; i < stack.size(); ++i) {
                w.path.push_back(policy.decode(stack[i].cfg));
                if (i > 0) {
                    const auto& parent = stack[i - 1];
                    w.edges.push_back(policy.out[static_cast<std::size_t>(parent.cfg[0])][stack[i].via].id);
                }
            }
            w.path.push_back(policy.decode(succ));
            w.edges.push_back(e.id);
            result.kind = ExploreKind::lasso_found;
            result.witness = std::move(w);
            result.goal_report.reset();
            return result;
        }

        if (result.stats.configs_expanded >= caps.max_configs) {
            result.stats.config_cap_hit = true;
            break;
        }
        ++result.stats.configs_expanded;
        seen.emplace(succ, static_cast<std::int64_t>(stack.size()));
        stack.push_back({succ, 0, false, ei});
    }

    if (result.stats.value_cap_hit || result.stats.config_cap_hit) {
        result.kind = ExploreKind::inconclusive;
        result.goal_report.reset();
    } else {
        result.kind = ExploreKind::all_halt;
    }
    return result;
}

bool replay_lasso(const Fmp& fmp, const LassoWitness& witness) {
    if (witness.path.size() != witness.edges.size() + 1 || witness.cycle_start + 1 >= witness.path.size()) {
        return false;
    }
    for (std::size_t i = 0; i < witness.edges.size(); ++i) {
        auto succs = step(fmp, witness.path[i]);
        bool ok = std::any_of(succs.begin(), succs.end(), [&](const Successor& s) {
            return s.edge_id == witness.edges[i] && s.next == witness.path[i + 1];
        });
        if (!ok) return false;
    }
    return witness.path.back() == witness.path[witness.cycle_start];
}

Execution run_random(const Fmp& fmp, const ConcreteState& s0, std::size_t max_steps, std::uint64_t seed) {
    Rng rng(seed);
    Execution ex;
    ex.start = {fmp.q0, s0};
    Configuration cur = ex.start;
    for (std::size_t i = 0; i < max_steps; ++i) {
        auto succs = step(fmp, cur);
        if (succs.empty()) {
            ex.halted = true;
            return ex;
        }
        auto& pick = succs[uniform_index(rng, succs.size())];
        cur = pick.next;
        ex.steps.push_back({pick.edge_id, cur});
    }
    ex.halted = step(fmp, cur).empty();
    return ex;
}

namespace {

// Values of `var` for which `e` can fire: its guard intersected with the
// lower-bound conditions on the current and the next state.
Interval firing_range(const Fmp& fmp, const Edge& e, const VarDecl& var) {
    Interval r{std::max(var.lower_bound, var.lower_bound - e.effect().get(var.name)), std::nullopt};
    if (auto it = e.guard.conjuncts.find(var.name); it != e.guard.conjuncts.end()) {
        r.min = std::max(r.min, it->second.min);
        r.max = it->second.max;
    }
    return r;
}

} // namespace

bool is_deterministic(const Fmp& fmp) {
    for (std::size_t i = 0; i < fmp.edges.size(); ++i) {
        for (std::size_t j = i + 1; j < fmp.edges.size(); ++j) {
            const Edge& a = fmp.edges[i];
            const Edge& b = fmp.edges[j];
            if (a.src != b.src) continue;
            bool disjoint = std::any_of(fmp.vars.begin(), fmp.vars.end(), [&](const VarDecl& v) {
                Interval ra = firing_range(fmp, a, v);
                Interval rb = firing_range(fmp, b, v);
                Value lo = std::max(ra.min, rb.min);
                std::optional<Value> hi = ra.max;
                if (rb.max && (!hi || *rb.max < *hi)) hi = rb.max;
                return hi && *hi < lo;
            });
            if (!disjoint) return false;
        }
    }
    return true;
}

std::vector<ConcreteState> initial_grid(const Fmp& fmp, Value grid_max) {
    std::vector<ConcreteState> out{ConcreteState{}};
    for (const auto& v : fmp.vars) {
        std::vector<ConcreteState> next;
        for (const auto& s : out) {
            for (Value k = 0; k <= grid_max; ++k) {
                ConcreteState t = s;
                t.values[v.name] = v.lower_bound + k;
                next.push_back(std::move(t));
            }
        }
        out = std::move(next);
    }
    return out;
}

} // namespace hsieve
