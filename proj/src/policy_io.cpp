#include "hsieve/policy_io.hpp"

#include "hsieve/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace hsieve {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& where, const std::string& message) {
    throw ParseError(code, where, message);
}

void only_fields(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!known) fail("unknown-field:" + key, where, "unknown field '" + key + "'");
    }
}

const json& field(const json& obj, const char* name, const std::string& where) {
    auto it = obj.find(name);
    if (it == obj.end()) fail(std::string("missing-field:") + name, where, std::string("missing field '") + name + "'");
    return *it;
}

std::string join(const std::string& where, const std::string& name) {
    return where.empty() ? name : where + "." + name;
}

const json& expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail("type-mismatch:" + where, where, "expected an object");
    return j;
}

const json& expect_array(const json& j, const std::string& where) {
    if (!j.is_array()) fail("type-mismatch:" + where, where, "expected an array");
    return j;
}

std::string expect_string(const json& j, const std::string& where) {
    if (!j.is_string()) fail("type-mismatch:" + where, where, "expected a string");
    return j.get<std::string>();
}

bool fits_int64(const json& j) {
    if (j.is_number_unsigned()) {
        return j.get<std::uint64_t>() <= static_cast<std::uint64_t>(std::numeric_limits<Value>::max());
    }
    return j.is_number_integer();
}

Value expect_int(const json& j, const std::string& where, const std::string& code) {
    if (!fits_int64(j)) fail(code, where, "expected an integer");
    return j.get<Value>();
}

Value expect_int(const json& j, const std::string& where) {
    return expect_int(j, where, "type-mismatch:" + where);
}

EffectVector parse_effects(const json& j, const std::string& where) {
    expect_object(j, where);
    EffectVector effect;
    for (const auto& [var, delta] : j.items()) {
        effect.set(var, expect_int(delta, join(where, var), "non-integer-effect"));
    }
    return effect;
}

Interval parse_goal_interval(const json& j, const std::string& where) {
    expect_array(j, where);
    if (j.empty() || j.size() > 2) fail("type-mismatch:" + where, where, "expected [min] or [min, max]");
    Interval iv{expect_int(j[0], where + "[0]"), std::nullopt};
    if (j.size() == 2 && !j[1].is_null()) iv.max = expect_int(j[1], where + "[1]");
    return iv;
}

Edge parse_edge(const json& j, const std::string& where) {
    expect_object(j, where);
    only_fields(j, where, {"id", "from", "to", "guard", "effects", "label"});
    Edge e;
    e.id = expect_string(field(j, "id", where), join(where, "id"));
    e.src = expect_string(field(j, "from", where), join(where, "from"));
    e.dst = expect_string(field(j, "to", where), join(where, "to"));

    if (auto it = j.find("guard"); it != j.end()) {
        const std::string gw = join(where, "guard");
        expect_array(*it, gw);
        for (std::size_t k = 0; k < it->size(); ++k) {
            const std::string cw = gw + "[" + std::to_string(k) + "]";
            const json& c = expect_object((*it)[k], cw);
            only_fields(c, cw, {"var", "min", "max"});
            std::string var = expect_string(field(c, "var", cw), join(cw, "var"));
            Interval iv{expect_int(field(c, "min", cw), join(cw, "min")), std::nullopt};
            if (auto mx = c.find("max"); mx != c.end() && !mx->is_null()) iv.max = expect_int(*mx, join(cw, "max"));
            if (!e.guard.conjuncts.emplace(var, iv).second) {
                fail("duplicate-guard-var", cw, "second condition on '" + var + "'");
            }
        }
    }

    const std::string ew = join(where, "effects");
    const json& effects = field(j, "effects", where);
    if (effects.is_array()) {
        for (std::size_t k = 0; k < effects.size(); ++k) {
            e.actions.push_back(parse_effects(effects[k], ew + "[" + std::to_string(k) + "]"));
        }
    } else {
        e.actions.push_back(parse_effects(effects, ew));
    }

    if (auto it = j.find("label"); it != j.end()) e.label = expect_string(*it, join(where, "label"));
    return e;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

} // namespace

Fmp parse_policy(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        fail("invalid-json", "line " + std::to_string(line_of(text, e.byte)), e.what());
    }

    expect_object(doc, "document");
    only_fields(doc, "", {"format_version", "variables", "qstates", "initial", "edges", "terminal", "goal"});

    Value version = expect_int(field(doc, "format_version", ""), "format_version");
    if (version != kPolicyFormatVersion) {
        fail("unsupported-version", "format_version", "unsupported format version " + std::to_string(version));
    }

    Fmp fmp;
    const json& vars = expect_array(field(doc, "variables", ""), "variables");
    for (std::size_t k = 0; k < vars.size(); ++k) {
        const std::string where = "variables[" + std::to_string(k) + "]";
        const json& v = expect_object(vars[k], where);
        only_fields(v, where, {"name", "lower_bound"});
        VarDecl decl{expect_string(field(v, "name", where), join(where, "name")), 0};
        if (auto it = v.find("lower_bound"); it != v.end()) decl.lower_bound = expect_int(*it, join(where, "lower_bound"));
        fmp.vars.push_back(std::move(decl));
    }

    const json& qstates = expect_array(field(doc, "qstates", ""), "qstates");
    for (std::size_t k = 0; k < qstates.size(); ++k) {
        fmp.qstates.push_back(expect_string(qstates[k], "qstates[" + std::to_string(k) + "]"));
    }

    fmp.q0 = expect_string(field(doc, "initial", ""), "initial");

    const json& edges = expect_array(field(doc, "edges", ""), "edges");
    for (std::size_t k = 0; k < edges.size(); ++k) {
        fmp.edges.push_back(parse_edge(edges[k], "edges[" + std::to_string(k) + "]"));
    }

    if (auto it = doc.find("terminal"); it != doc.end()) {
        expect_array(*it, "terminal");
        std::set<std::string> terminal;
        for (std::size_t k = 0; k < it->size(); ++k) {
            terminal.insert(expect_string((*it)[k], "terminal[" + std::to_string(k) + "]"));
        }
        fmp.terminal = std::move(terminal);
    }

    if (auto it = doc.find("goal"); it != doc.end()) {
        expect_object(*it, "goal");
        std::map<std::string, Interval> goal;
        for (const auto& [var, range] : it->items()) goal[var] = parse_goal_interval(range, "goal." + var);
        fmp.goal = std::move(goal);
    }
    return fmp;
}

namespace {

ordered_json effects_json(const EffectVector& effect) {
    ordered_json j = ordered_json::object();
    for (const auto& [var, d] : effect.deltas()) j[var] = d;
    return j;
}

} // namespace

std::string serialize_policy(const Fmp& fmp) {
    ordered_json doc;
    doc["format_version"] = kPolicyFormatVersion;

    ordered_json vars = ordered_json::array();
    for (const auto& v : fmp.vars) vars.push_back({{"name", v.name}, {"lower_bound", v.lower_bound}});
    doc["variables"] = std::move(vars);
    doc["qstates"] = fmp.qstates;
    doc["initial"] = fmp.q0;

    ordered_json edges = ordered_json::array();
    for (const auto& e : fmp.edges) {
        ordered_json je;
        je["id"] = e.id;
        je["from"] = e.src;
        je["to"] = e.dst;
        if (!e.guard.empty()) {
            ordered_json guard = ordered_json::array();
            for (const auto& [var, iv] : e.guard.conjuncts) {
                ordered_json c{{"var", var}, {"min", iv.min}};
                if (iv.max) c["max"] = *iv.max;
                guard.push_back(std::move(c));
            }
            je["guard"] = std::move(guard);
        }
        if (e.actions.size() == 1) {
            je["effects"] = effects_json(e.actions.front());
        } else {
            ordered_json alts = ordered_json::array();
            for (const auto& a : e.actions) alts.push_back(effects_json(a));
            je["effects"] = std::move(alts);
        }
        if (!e.label.empty()) je["label"] = e.label;
        edges.push_back(std::move(je));
    }
    doc["edges"] = std::move(edges);

    if (fmp.terminal) doc["terminal"] = ordered_json(std::vector<std::string>(fmp.terminal->begin(), fmp.terminal->end()));
    if (fmp.goal) {
        ordered_json goal = ordered_json::object();
        for (const auto& [var, iv] : *fmp.goal) {
            ordered_json range = ordered_json::array({iv.min});
            if (iv.max) range.push_back(*iv.max);
            goal[var] = std::move(range);
        }
        doc["goal"] = std::move(goal);
    }
    return doc.dump(2) + "\n";
}

Fmp load_policy(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("unreadable-file", "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_policy(buf.str());
}

void write_file_atomic(const std::string& path, std::string_view content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("unwritable-file", "cannot write '" + tmp + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("unwritable-file", "cannot write '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("unwritable-file", "cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

} // namespace hsieve
