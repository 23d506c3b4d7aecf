#include "hsieve/cli.hpp"

#include "hsieve/analysis.hpp"
#include "hsieve/error.hpp"
#include "hsieve/oracle.hpp"
#include "hsieve/policy_io.hpp"
#include "hsieve/workbench.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <ostream>

namespace hsieve {

namespace {

constexpr int kRan = 0;
constexpr int kStrictUnknown = 1;
constexpr int kInputError = 2;

struct Options {
    std::string file;
    std::uint64_t seed = 0;
    std::size_t def_samples = AnalysisConfig{}.def_samples;
    std::optional<std::size_t> path_cap;
    std::string trace;
    std::string emit_dot;
    std::string iv_scope = "per_tree";
    bool parallel = false;
    bool strict = false;

    std::string init;
    std::size_t max_steps = 1000;

    Value grid_max = 3;
    std::size_t max_configs = ExploreCaps{}.max_configs;
    std::optional<Value> max_value;

    GenSpec gen;
    std::string out_file;
    bool def = false;
};

std::size_t resolve_path_cap(const Options& o) {
    if (o.path_cap) return *o.path_cap;
    if (const char* env = std::getenv("HSIEVE_PATH_CAP")) {
        try {
            std::size_t pos = 0;
            const unsigned long long cap = std::stoull(env, &pos);
            if (pos == std::string(env).size() && cap > 0) return static_cast<std::size_t>(cap);
        } catch (const std::exception&) {
        }
        throw Error("bad-env", std::string("HSIEVE_PATH_CAP must be a positive integer, got '") + env + "'");
    }
    return kDefaultPathCap;
}

Fmp load_normalized(const std::string& path) {
    return normalize(load_policy(path));
}

ConcreteState parse_init(const Fmp& fmp, const std::string& spec) {
    ConcreteState s;
    for (const auto& v : fmp.vars) s.values[v.name] = v.lower_bound;
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("bad-init", "expected name=value in --init, got '" + item + "'");
        const std::string var = item.substr(0, eq);
        if (fmp.find_var(var) == nullptr) throw Error("bad-init", "unknown variable '" + var + "' in --init");
        try {
            std::size_t pos = 0;
            const Value v = std::stoll(item.substr(eq + 1), &pos);
            if (pos != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
            s.values[var] = v;
        } catch (const std::exception&) {
            throw Error("bad-init", "non-integer value for '" + var + "' in --init");
        }
    }
    if (!well_formed(fmp, s)) throw Error("bad-init", "--init violates a lower bound");
    return s;
}

std::string format_state(const ConcreteState& s) {
    std::string out;
    for (const auto& [var, v] : s.values) {
        if (!out.empty()) out += ' ';
        out += var + "=" + std::to_string(v);
    }
    return out;
}

int run_check(const Options& o, std::ostream& out) {
    const Fmp fmp = load_policy(o.file);
    const auto violations = validate(fmp);
    if (violations.empty()) {
        out << "valid=true\n";
        return kRan;
    }
    out << "valid=false violations=" << violations.size() << "\n";
    for (const auto& v : violations) out << "violation code=" << v.code << " detail=" << v.detail << "\n";
    return kInputError;
}

int run_analyze(const Options& o, std::ostream& out) {
    const Fmp fmp = load_normalized(o.file);
    AnalysisConfig config;
    config.def_samples = o.def_samples;
    config.base_seed = o.seed;
    config.path_cap = resolve_path_cap(o);
    config.iv_scope = o.iv_scope == "global" ? IvScope::global : IvScope::per_tree;
    config.parallel = o.parallel;

    const AnalysisReport report = hsieve(fmp, config);

    if (!o.trace.empty()) write_file_atomic(o.trace, report_to_json(report).dump(2) + "\n");
    if (!o.emit_dot.empty()) {
        std::filesystem::create_directories(o.emit_dot);
        const std::filesystem::path dir(o.emit_dot);
        write_file_atomic((dir / "policy.dot").string(), export_dot(fmp));
        for (std::size_t i = 0; i < report.iterations.size(); ++i) {
            write_file_atomic((dir / ("def_iter" + std::to_string(i + 1) + ".dot")).string(),
                              export_def_dot(report.iterations[i].forest));
        }
    }

    out << "verdict=" << to_string(report.verdict.kind);
    if (report.verdict.kind != VerdictKind::terminating) out << " detail=" << report.verdict.detail;
    out << " iterations=" << report.iterations.size() << "\n";
    return (o.strict && report.verdict.kind == VerdictKind::unknown) ? kStrictUnknown : kRan;
}

int run_sieve(const Options& o, std::ostream& out) {
    const Verdict v = progress_sieve(load_normalized(o.file));
    out << "verdict=" << to_string(v.kind) << "\n";
    return kRan;
}

int run_simulate(const Options& o, std::ostream& out) {
    const Fmp fmp = load_normalized(o.file);
    const ConcreteState s0 = parse_init(fmp, o.init);
    const Execution ex = run_random(fmp, s0, o.max_steps, o.seed);
    out << "start q=" << ex.start.qstate << " " << format_state(ex.start.state) << "\n";
    for (std::size_t i = 0; i < ex.steps.size(); ++i) {
        const auto& s = ex.steps[i];
        out << "step=" << i + 1 << " edge=" << s.edge_id << " q=" << s.after.qstate << " "
            << format_state(s.after.state) << "\n";
    }
    out << "halted=" << (ex.halted ? "true" : "false") << " steps=" << ex.steps.size() << "\n";
    return kRan;
}

int run_oracle(const Options& o, std::ostream& out) {
    const Fmp fmp = load_normalized(o.file);
    if (o.grid_max < 0) throw Error("bad-grid", "--grid-max must be non-negative");
    ExploreCaps caps{o.max_configs, o.max_value};

    std::size_t halts = 0, lassos = 0, inconclusive = 0;
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    std::optional<std::pair<ConcreteState, ExploreResult>> first_lasso;
    const auto grid = initial_grid(fmp, o.grid_max);
    for (const auto& s0 : grid) {
        ExploreResult r = explore(fmp, s0, caps);
        switch (r.kind) {
        case ExploreKind::all_halt: ++halts; break;
        case ExploreKind::lasso_found: ++lassos; break;
        case ExploreKind::inconclusive: ++inconclusive; break;
        }
        if (!o.trace.empty()) {
            nlohmann::ordered_json run;
            nlohmann::ordered_json start = nlohmann::ordered_json::object();
            for (const auto& [var, v] : s0.values) start[var] = v;
            run["start"] = std::move(start);
            run["explore"] = explore_to_json(r);
            runs.push_back(std::move(run));
        }
        if (r.kind == ExploreKind::lasso_found && !first_lasso) first_lasso.emplace(s0, std::move(r));
    }

    const ExploreKind overall = lassos > 0         ? ExploreKind::lasso_found
                                : inconclusive > 0 ? ExploreKind::inconclusive
                                                   : ExploreKind::all_halt;
    out << "result=" << to_string(overall) << " starts=" << grid.size() << " all_halt=" << halts
        << " lasso_found=" << lassos << " inconclusive=" << inconclusive << "\n";
    if (first_lasso) {
        const auto& w = *first_lasso->second.witness;
        out << "witness start=\"" << format_state(first_lasso->first) << "\" edges=";
        for (std::size_t i = 0; i < w.edges.size(); ++i) out << (i ? "," : "") << w.edges[i];
        out << " cycle_start=" << w.cycle_start << "\n";
    }
    if (!o.trace.empty()) {
        nlohmann::ordered_json doc;
        doc["result"] = to_string(overall);
        doc["grid_max"] = o.grid_max;
        doc["starts"] = grid.size();
        doc["all_halt"] = halts;
        doc["lasso_found"] = lassos;
        doc["inconclusive"] = inconclusive;
        doc["runs"] = std::move(runs);
        write_file_atomic(o.trace, doc.dump(2) + "\n");
    }
    return kRan;
}

int run_generate(const Options& o, std::ostream& out) {
    const std::string text = serialize_policy(generate_random(o.gen));
    if (o.out_file.empty()) {
        out << text;
    } else {
        write_file_atomic(o.out_file, text);
    }
    return kRan;
}

int run_export_dot(const Options& o, std::ostream& out) {
    const Fmp fmp = load_normalized(o.file);
    out << (o.def ? export_def_dot(build_def(policy_graph(fmp), o.seed)) : export_dot(fmp));
    return kRan;
}

} // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Termination analysis for finite-memory policies over lower-bounded counters", "hsieve"};
    app.require_subcommand(1);
    Options o;

    auto* check = app.add_subcommand("check", "Validate a policy file");
    check->add_option("file", o.file, "Policy file")->required();

    auto* analyze = app.add_subcommand("analyze", "Run the hierarchical sieve");
    analyze->add_option("file", o.file, "Policy file")->required();
    analyze->add_option("--seed", o.seed, "Base seed for elimination forests");
    analyze->add_option("--def-samples", o.def_samples, "Number of elimination-forest samples")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--path-cap", o.path_cap, "Maximum path summaries per DET node (env HSIEVE_PATH_CAP)")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--trace", o.trace, "Write a JSON trace file");
    analyze->add_option("--emit-dot", o.emit_dot, "Write DOT files for the policy and each forest");
    analyze->add_option("--iv-scope", o.iv_scope, "per_tree or global")
        ->check(CLI::IsMember({"per_tree", "global"}));
    analyze->add_flag("--parallel", o.parallel, "Evaluate forest samples concurrently");
    analyze->add_flag("--strict", o.strict, "Exit 1 when the verdict is unknown");

    auto* sieve = app.add_subcommand("sieve", "Run the Progress-Sieve baseline");
    sieve->add_option("file", o.file, "Policy file")->required();

    auto* simulate = app.add_subcommand("simulate", "Random execution from an initial state");
    simulate->add_option("file", o.file, "Policy file")->required();
    simulate->add_option("--init", o.init, "Initial values, e.g. x=3,y=0 (omitted variables start at their bound)");
    simulate->add_option("--max-steps", o.max_steps, "Step limit");
    simulate->add_option("--seed", o.seed, "Random seed");

    auto* oracle = app.add_subcommand("oracle", "Exhaustive lasso search over a grid of initial states");
    oracle->add_option("file", o.file, "Policy file")->required();
    oracle->add_option("--grid-max", o.grid_max, "Each variable ranges over bound..bound+B")->required();
    oracle->add_option("--max-configs", o.max_configs, "Configuration cap per start");
    oracle->add_option("--max-value", o.max_value, "Value cap (default 64 * (max init + max |delta|))");
    oracle->add_option("--trace", o.trace, "Write a JSON file with per-start results and witnesses");

    auto* generate = app.add_subcommand("generate", "Generate a random policy");
    generate->add_option("--qstates", o.gen.n_qstates, "Number of qstates")->required();
    generate->add_option("--vars", o.gen.n_vars, "Number of variables")->required();
    generate->add_option("--density", o.gen.edge_density, "Edge density in (0, 1]")->required();
    generate->add_option("--max-delta", o.gen.max_abs_delta, "Largest absolute effect")->required();
    generate->add_option("--seed", o.gen.seed, "Random seed")->required();
    generate->add_option("--out", o.out_file, "Write to a file instead of stdout");

    auto* dot = app.add_subcommand("export-dot", "Render a policy or its elimination forest as DOT");
    dot->add_option("file", o.file, "Policy file")->required();
    dot->add_flag("--def", o.def, "Render the elimination forest instead");
    dot->add_option("--seed", o.seed, "Seed for the forest");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kRan : kInputError;
    }

    try {
        if (check->parsed()) return run_check(o, out);
        if (analyze->parsed()) return run_analyze(o, out);
        if (sieve->parsed()) return run_sieve(o, out);
        if (simulate->parsed()) return run_simulate(o, out);
        if (oracle->parsed()) return run_oracle(o, out);
        if (generate->parsed()) return run_generate(o, out);
        if (dot->parsed()) return run_export_dot(o, out);
    } catch (const Error& e) {
        err << "error: " << e.code() << ": " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

} // namespace hsieve
