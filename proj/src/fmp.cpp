#include "hsieve/fmp.hpp"

#include "hsieve/error.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace hsieve {

EffectVector::EffectVector(std::initializer_list<std::pair<const std::string, Value>> deltas) {
    for (const auto& [var, delta] : deltas) {
        set(var, get(var) + delta);
    }
}

Value EffectVector::get(const std::string& var) const {
    auto it = deltas_.find(var);
    return it == deltas_.end() ? 0 : it->second;
}

void EffectVector::set(const std::string& var, Value delta) {
    if (delta == 0) {
        deltas_.erase(var);
    } else {
        deltas_[var] = delta;
    }
}

EffectVector& EffectVector::operator+=(const EffectVector& other) {
    for (const auto& [var, delta] : other.deltas_) {
        set(var, get(var) + delta);
    }
    return *this;
}

VarSet EffectVector::decreased() const {
    VarSet out;
    for (const auto& [var, delta] : deltas_) {
        if (delta < 0) out.insert(var);
    }
    return out;
}

VarSet EffectVector::increased() const {
    VarSet out;
    for (const auto& [var, delta] : deltas_) {
        if (delta > 0) out.insert(var);
    }
    return out;
}

EffectVector operator+(EffectVector lhs, const EffectVector& rhs) {
    lhs += rhs;
    return lhs;
}

Value ConcreteState::get(const std::string& var) const {
    auto it = values.find(var);
    if (it == values.end()) {
        throw std::out_of_range("state has no value for variable '" + var + "'");
    }
    return it->second;
}

bool Guard::satisfied_by(const ConcreteState& state) const {
    return std::all_of(conjuncts.begin(), conjuncts.end(), [&](const auto& c) {
        auto it = state.values.find(c.first);
        return it != state.values.end() && c.second.contains(it->second);
    });
}

Edge Edge::simple(std::string id, std::string src, std::string dst, EffectVector effect,
                  Guard guard, std::string label) {
    return Edge{std::move(id), std::move(src), std::move(dst), std::move(guard),
                {std::move(effect)}, std::move(label)};
}

const EffectVector& Edge::effect() const {
    if (actions.size() != 1) {
        throw std::logic_error("edge '" + id + "' carries " + std::to_string(actions.size()) +
                               " actions; normalize the policy first");
    }
    return actions.front();
}

const VarDecl* Fmp::find_var(const std::string& name) const {
    auto it = std::find_if(vars.begin(), vars.end(), [&](const VarDecl& v) { return v.name == name; });
    return it == vars.end() ? nullptr : &*it;
}

const Edge* Fmp::find_edge(const std::string& id) const {
    auto it = std::find_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.id == id; });
    return it == edges.end() ? nullptr : &*it;
}

Value Fmp::lower_bound(const std::string& var) const {
    const VarDecl* decl = find_var(var);
    if (decl == nullptr) {
        throw std::out_of_range("undeclared variable '" + var + "'");
    }
    return decl->lower_bound;
}

std::vector<std::string> Fmp::var_names() const {
    std::vector<std::string> names;
    names.reserve(vars.size());
    for (const auto& v : vars) names.push_back(v.name);
    return names;
}

bool Fmp::is_normalized() const {
    return std::all_of(edges.begin(), edges.end(), [](const Edge& e) { return e.actions.size() == 1; });
}

std::vector<Violation> validate(const Fmp& fmp) {
    std::vector<Violation> out;
    auto report = [&](std::string code, std::string detail) {
        out.push_back({std::move(code), std::move(detail)});
    };

    std::unordered_set<std::string> var_names;
    for (const auto& v : fmp.vars) {
        if (v.name.empty()) report("empty-identifier", "variable with empty name");
        if (!var_names.insert(v.name).second) report("duplicate-var", v.name);
    }

    std::unordered_set<std::string> qstates;
    for (const auto& q : fmp.qstates) {
        if (q.empty()) report("empty-identifier", "qstate with empty name");
        if (!qstates.insert(q).second) report("duplicate-qstate", q);
    }
    if (!qstates.contains(fmp.q0)) report("unknown-initial", "initial qstate '" + fmp.q0 + "'");

    auto check_var = [&](const std::string& var, const std::string& where) {
        if (!var_names.contains(var)) report("undeclared-var", "'" + var + "' in " + where);
    };
    auto check_interval = [&](const Interval& iv, const std::string& where) {
        if (iv.max && *iv.max < iv.min) report("bad-interval", where);
    };

    std::unordered_set<std::string> edge_ids;
    std::unordered_set<std::string> has_outgoing;
    for (const auto& e : fmp.edges) {
        const std::string where = "edge '" + e.id + "'";
        if (e.id.empty()) report("empty-identifier", "edge with empty id");
        if (!edge_ids.insert(e.id).second) report("duplicate-edge-id", e.id);
        if (!qstates.contains(e.src)) report("unknown-qstate", where + " source '" + e.src + "'");
        if (!qstates.contains(e.dst)) report("unknown-qstate", where + " target '" + e.dst + "'");
        has_outgoing.insert(e.src);
        for (const auto& [var, iv] : e.guard.conjuncts) {
            check_var(var, where + " guard");
            check_interval(iv, where + " guard on '" + var + "'");
        }
        for (const auto& action : e.actions) {
            for (const auto& [var, delta] : action.deltas()) check_var(var, where + " effect");
        }
    }

    if (fmp.terminal) {
        for (const auto& t : *fmp.terminal) {
            if (!qstates.contains(t)) report("unknown-terminal", t);
            if (has_outgoing.contains(t)) report("terminal-has-outgoing", t);
        }
    }
    if (fmp.goal) {
        for (const auto& [var, iv] : *fmp.goal) {
            check_var(var, "goal");
            check_interval(iv, "goal on '" + var + "'");
        }
    }
    return out;
}

void require_valid(const Fmp& fmp) {
    auto violations = validate(fmp);
    if (!violations.empty()) {
        const auto& first = violations.front();
        throw InvalidPolicy(first.code, "invalid policy: " + first.code + " (" + first.detail + ")");
    }
}

Fmp normalize(const Fmp& fmp, NormalizeLog* log) {
    require_valid(fmp);

    std::unordered_set<std::string> taken;
    for (const auto& e : fmp.edges) taken.insert(e.id);

    Fmp out = fmp;
    out.edges.clear();
    for (const auto& e : fmp.edges) {
        if (e.actions.size() == 1) {
            out.edges.push_back(e);
            continue;
        }
        if (e.actions.empty()) {
            if (log) log->entries.push_back("removed edge '" + e.id + "': empty action set");
            continue;
        }
        for (std::size_t k = 0; k < e.actions.size(); ++k) {
            std::string id = e.id + "#" + std::to_string(k + 1);
            while (!taken.insert(id).second) id += "'";
            out.edges.push_back(Edge{id, e.src, e.dst, e.guard, {e.actions[k]}, e.label});
        }
        if (log) {
            log->entries.push_back("split edge '" + e.id + "' into " + std::to_string(e.actions.size()) +
                                   " parallel edges");
        }
    }
    return out;
}

EffectVector net_change(std::span<const Edge> path) {
    EffectVector net;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0 && path[i - 1].dst != path[i].src) {
            throw std::invalid_argument("edge '" + path[i].id + "' does not continue from '" +
                                        path[i - 1].id + "'");
        }
        net += path[i].effect();
    }
    return net;
}

bool enabled(const Fmp& fmp, const Edge& edge, const ConcreteState& state) {
    if (!edge.guard.satisfied_by(state)) return false;
    const EffectVector& effect = edge.effect();
    for (const auto& v : fmp.vars) {
        if (state.get(v.name) + effect.get(v.name) < v.lower_bound) return false;
    }
    return true;
}

bool well_formed(const Fmp& fmp, const ConcreteState& state) {
    if (state.values.size() != fmp.vars.size()) return false;
    return std::all_of(fmp.vars.begin(), fmp.vars.end(), [&](const VarDecl& v) {
        auto it = state.values.find(v.name);
        return it != state.values.end() && it->second >= v.lower_bound;
    });
}

ConcreteState apply(const EffectVector& effect, ConcreteState state) {
    for (const auto& [var, delta] : effect.deltas()) state.values[var] += delta;
    return state;
}

} // namespace hsieve
