// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit status
// when any criterion fails.

#include "support/oracles.hpp"
#include "support/properties.hpp"

#include "hsieve/analysis.hpp"
#include "hsieve/cli.hpp"
#include "hsieve/policy_io.hpp"
#include "hsieve/workbench.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using hsieve::AnalysisConfig;
using hsieve::Fmp;
using hsieve::VerdictKind;
using Clock = std::chrono::steady_clock;

namespace {

struct Result {
    bool pass = true;
    std::string summary;
    std::vector<std::string> notes; // printed under the line
};

struct Criterion {
    std::string id;
    std::function<Result()> run;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::filesystem::path work_dir() {
    const auto dir = std::filesystem::current_path() / "acceptance_out";
    std::filesystem::create_directories(dir);
    return dir;
}

struct CliRun {
    int status;
    std::string out;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = hsieve::cli_dispatch(args, out, err);
    return {status, out.str() + err.str()};
}

nlohmann::json read_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

std::string dump_instance(const std::string& tag, const Fmp& fmp) {
    const auto path = work_dir() / (tag + ".fmp.json");
    hsieve::write_file_atomic(path.string(), hsieve::serialize_policy(fmp));
    return path.string();
}

// Soundness corpus shared by A2, A6 and A8.
constexpr std::size_t kCorpusSize = 500;
constexpr hsieve::Value kGridMax = 3;

struct CorpusEntry {
    Fmp fmp;
    hsieve::Verdict single;
    hsieve::Verdict sampled; // def_samples = 20
    hsieve::Verdict sieve;
};

// Disconnected policies with several SCCs, which the generator rarely makes.
constexpr std::size_t kMultiSccSize = 3000;

const std::vector<CorpusEntry>& multi_scc_corpus() {
    static const std::vector<CorpusEntry> entries = [] {
        std::vector<CorpusEntry> out;
        hsieve::Rng rng(4242);
        for (std::size_t i = 0; i < kMultiSccSize; ++i) {
            CorpusEntry e;
            e.fmp = props::random_policy(rng, 6, 3, 2);
            AnalysisConfig cfg;
            cfg.base_seed = i;
            e.single = hsieve::hsieve(e.fmp, cfg).verdict;
            cfg.def_samples = 20;
            e.sampled = hsieve::hsieve(e.fmp, cfg).verdict;
            e.sieve = hsieve::progress_sieve(e.fmp);
            out.push_back(std::move(e));
        }
        return out;
    }();
    return entries;
}

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = [] {
        std::vector<CorpusEntry> out;
        for (std::size_t i = 0; i < kCorpusSize; ++i) {
            CorpusEntry e;
            e.fmp = hsieve::generate_random(oracles::corpus_spec(i));
            AnalysisConfig cfg;
            cfg.base_seed = i;
            e.single = hsieve::hsieve(e.fmp, cfg).verdict;
            cfg.def_samples = 20;
            e.sampled = hsieve::hsieve(e.fmp, cfg).verdict;
            e.sieve = hsieve::progress_sieve(e.fmp);
            out.push_back(std::move(e));
        }
        return out;
    }();
    return entries;
}

Result a1() {
    Result r;
    const std::string path = oracles::fixture_path("example1.fmp.json");
    const auto t0 = Clock::now();
    const CliRun analyze = cli({"analyze", path});
    const CliRun sieve = cli({"sieve", path});
    const double elapsed = seconds_since(t0);
    r.pass = analyze.status == 0 && analyze.out == "verdict=terminating iterations=1\n" && sieve.status == 0 &&
             sieve.out == "verdict=nonterminating_qualitative\n" && elapsed < 1.0;
    std::ostringstream s;
    s << "analyze: " << analyze.out.substr(0, analyze.out.size() - 1) << "; sieve: "
      << sieve.out.substr(0, sieve.out.size() - 1) << "; " << elapsed * 1000 << " ms";
    r.summary = s.str();
    return r;
}

Result a2() {
    Result r;
    std::size_t terminating = 0, starts = 0, halts = 0, lassos = 0, inconclusive = 0, lasso_policies = 0;
    for (std::size_t i = 0; i < corpus().size(); ++i) {
        const auto& e = corpus()[i];
        if (e.single.kind != VerdictKind::terminating && e.sampled.kind != VerdictKind::terminating) continue;
        ++terminating;
        const auto g = oracles::run_grid(e.fmp, kGridMax);
        starts += g.starts;
        halts += g.halts;
        lassos += g.lassos;
        inconclusive += g.inconclusive;
        if (g.lassos > 0) {
            ++lasso_policies;
            r.notes.push_back("lasso under a terminating verdict, corpus index " + std::to_string(i) + ": " +
                              dump_instance("a2_counterexample_" + std::to_string(i), e.fmp));
        }
    }
    const double rate = starts == 0 ? 0.0 : static_cast<double>(inconclusive) / static_cast<double>(starts);

    std::size_t extra_terminating = 0, extra_lassos = 0;
    for (std::size_t i = 0; i < multi_scc_corpus().size(); ++i) {
        const auto& e = multi_scc_corpus()[i];
        if (e.single.kind != VerdictKind::terminating && e.sampled.kind != VerdictKind::terminating) continue;
        ++extra_terminating;
        const auto g = oracles::run_grid(e.fmp, kGridMax);
        extra_lassos += g.lassos;
        if (g.lassos > 0) {
            r.notes.push_back("lasso under a terminating verdict, multi-SCC index " + std::to_string(i) + ": " +
                              dump_instance("a2_multiscc_counterexample_" + std::to_string(i), e.fmp));
        }
    }

    r.pass = corpus().size() >= 500 && lassos == 0 && rate < 0.20 && extra_lassos == 0;
    std::ostringstream s;
    s << corpus().size() << " policies, " << terminating << " terminating verdicts, " << starts
      << " oracle starts: all_halt=" << halts << " lasso_found=" << lassos << " inconclusive=" << inconclusive
      << " (rate " << rate * 100 << "%); multi-SCC set: " << extra_terminating << " terminating of "
      << multi_scc_corpus().size() << ", lasso_found=" << extra_lassos;
    r.summary = s.str();
    return r;
}

Result a3() {
    Result r;
    const auto dir = work_dir();
    std::vector<std::string> problems;

    const auto f2_trace = dir / "f2.trace.json";
    const CliRun f2 = cli({"analyze", oracles::fixture_path("f2.fmp.json"), "--trace", f2_trace.string()});
    const auto t2 = read_json(f2_trace);
    if (f2.out != "verdict=terminating iterations=2\n") problems.push_back("F2 output: " + f2.out);
    if (t2["verdict"] != "terminating") problems.push_back("F2 trace verdict");
    if (t2["iterations"].size() != 2) problems.push_back("F2 iteration count");
    if (t2["iterations"][0]["removed_edges"] != nlohmann::json::array({"e2"})) problems.push_back("F2 removals in 1");
    if (t2["iterations"][1]["removed_edges"] != nlohmann::json::array()) problems.push_back("F2 removals in 2");
    if (t2["iterations"][0]["edge_count"] != 2 || t2["iterations"][1]["edge_count"] != 1) problems.push_back("F2 edges");

    const auto f3_trace = dir / "f3.trace.json";
    const auto f3_oracle = dir / "f3.oracle.json";
    const CliRun f3 = cli({"analyze", oracles::fixture_path("f3.fmp.json"), "--trace", f3_trace.string(), "--strict"});
    const CliRun f3o = cli({"oracle", oracles::fixture_path("f3.fmp.json"), "--grid-max", "0", "--trace", f3_oracle.string()});
    const auto t3 = read_json(f3_trace);
    const auto o3 = read_json(f3_oracle);
    if (f3.status != 1 || t3["verdict"] != "unknown") problems.push_back("F3 verdict: " + f3.out);
    if (t3["iterations"][0]["dv"] != nlohmann::json::parse(R"([[], ["x"]])")) problems.push_back("F3 DV");
    if (t3["iterations"][0]["zv"] != nlohmann::json::array({"x"})) problems.push_back("F3 ZV");
    const auto expected_witness = nlohmann::json::parse(R"({
        "path": [{"qstate": "q0", "state": {"x": 0}},
                 {"qstate": "q1", "state": {"x": 1}},
                 {"qstate": "q0", "state": {"x": 0}}],
        "edges": ["e2", "e3"],
        "cycle_start": 0})");
    if (o3["result"] != "lasso_found" || o3["runs"].size() != 1 || o3["runs"][0]["explore"]["witness"] != expected_witness) {
        problems.push_back("F3 witness: " + o3.dump());
    }
    r.pass = problems.empty();
    r.summary = r.pass ? "F2 terminating after removing {e2} in iteration 1 of 2; F3 unknown with lasso "
                         "(q0,x=0)-e2->(q1,x=1)-e3->(q0,x=0)"
                       : std::to_string(problems.size()) + " mismatches";
    r.notes = problems;
    return r;
}

Result a4() {
    Result r;
    const auto trace = work_dir() / "f8p.trace.json";
    const CliRun run = cli({"analyze", oracles::fixture_path("f8p.fmp.json"), "--trace", trace.string()});
    const auto t = read_json(trace);
    std::size_t removal_rounds = 0;
    bool shrinking = true;
    std::string counts;
    for (std::size_t i = 0; i < t["iterations"].size(); ++i) {
        const auto& it = t["iterations"][i];
        if (!it["removed_edges"].empty()) ++removal_rounds;
        if (i > 0 && it["edge_count"].get<std::size_t>() >= t["iterations"][i - 1]["edge_count"].get<std::size_t>()) {
            shrinking = false;
        }
        counts += (i ? "->" : "") + std::to_string(it["edge_count"].get<std::size_t>());
    }
    const auto oracle = oracles::run_grid(oracles::load_fixture("f8p.fmp.json"), kGridMax);
    r.pass = t["verdict"] == "terminating" && removal_rounds >= 2 && t["iterations"].size() >= 2 && shrinking &&
             oracle.lassos == 0;
    r.summary = "verdict " + t["verdict"].get<std::string>() + " after " + std::to_string(removal_rounds) +
                " removal rounds, edge counts " + counts + "; oracle lasso_found=" + std::to_string(oracle.lassos);
    return r;
}

Result a5() {
    Result r;
    double worst = 0;
    std::size_t count = 0;
    std::map<std::string, std::size_t> verdicts;
    for (double density : {0.2, 0.3, 0.4, 0.6, 1.0}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const Fmp f = hsieve::generate_random(hsieve::GenSpec{10, 7, density, 2, seed});
            const auto t0 = Clock::now();
            const auto report = hsieve::hsieve(f);
            const double t = seconds_since(t0);
            worst = std::max(worst, t);
            ++count;
            ++verdicts[hsieve::to_string(report.verdict.kind) +
                       (report.verdict.kind == VerdictKind::unknown ? "(" + report.verdict.detail + ")" : "")];
            if (t > 5.0) r.notes.push_back("slow instance: " + dump_instance("a5_slow_" + std::to_string(count), f));
        }
    }
    r.pass = worst <= 5.0;
    std::ostringstream s;
    s << count << " policies (10 qstates, 7 vars, density 0.2..1.0), slowest " << worst * 1000 << " ms;";
    for (const auto& [v, n] : verdicts) s << " " << v << "=" << n;
    r.summary = s.str();
    return r;
}

hsieve::GenSpec a6_spec(std::size_t i) {
    hsieve::GenSpec spec;
    spec.n_qstates = 2 + i % 7;
    spec.n_vars = 1 + (i / 7) % 3;
    spec.edge_density = 0.3;
    spec.max_abs_delta = 2;
    spec.seed = 500000 + i;
    return spec;
}

// Verdict kinds of hsieve_once over seeds 0..4; true when they disagree.
bool seeds_disagree(const Fmp& f, std::string& kinds) {
    std::set<VerdictKind> seen;
    kinds.clear();
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto v = hsieve::hsieve_once(f, s).verdict.kind;
        seen.insert(v);
        kinds += (s ? "," : "") + hsieve::to_string(v);
    }
    return seen.size() > 1;
}

Result a6() {
    Result r;
    constexpr std::size_t kBudget = 10000;
    std::optional<std::size_t> found;
    std::string kinds;
    std::size_t searched = 0;
    for (std::size_t i = 0; i < kBudget && !found; ++i) {
        ++searched;
        if (seeds_disagree(hsieve::generate_random(a6_spec(i)), kinds)) found = i;
    }

    std::vector<std::string> problems;
    std::ostringstream s;
    if (found) {
        const Fmp f = hsieve::generate_random(a6_spec(*found));
        s << "search index " << *found << " after " << searched << " policies, seeds 0..4 give [" << kinds << "]";
        dump_instance("a6_found", f);
        AnalysisConfig cfg;
        cfg.def_samples = 5;
        const auto sampled = hsieve::hsieve(f, cfg);
        s << ", 5-sample verdict " << hsieve::to_string(sampled.verdict.kind);
        if (sampled.verdict.kind != VerdictKind::terminating) problems.push_back("sampling did not recover terminating");
        const auto g = oracles::run_grid(f, kGridMax);
        if (g.lassos > 0) problems.push_back("oracle found a lasso on the found instance");
    } else {
        s << "budget exhausted: " << searched << " policies x 5 seeds without disagreement";
    }

    // The archived fixture must keep showing the behavior.
    const std::string archived = oracles::fixture_path("def_dependent.fmp.json");
    if (std::filesystem::exists(archived)) {
        std::string archived_kinds;
        const Fmp f = hsieve::load_policy(archived);
        if (!seeds_disagree(f, archived_kinds)) problems.push_back("archived fixture no longer seed-dependent");
        if (oracles::run_grid(f, kGridMax).lassos > 0) problems.push_back("archived fixture has a lasso");
        s << "; archived fixture seeds 0..4 give [" << archived_kinds << "]";
    } else if (found) {
        problems.push_back("instance found but not archived as fixtures/def_dependent.fmp.json");
    }

    // Multi-sample verdicts never turn unsound anywhere on the soundness corpus.
    std::size_t converted = 0, unsound = 0;
    for (std::size_t i = 0; i < corpus().size(); ++i) {
        const auto& e = corpus()[i];
        if (e.sampled.kind == VerdictKind::terminating && e.single.kind != VerdictKind::terminating) {
            ++converted;
            if (oracles::run_grid(e.fmp, kGridMax).lassos > 0) {
                ++unsound;
                problems.push_back("unsound conversion at corpus index " + std::to_string(i) + ": " +
                                   dump_instance("a6_unsound_" + std::to_string(i), e.fmp));
            }
        }
    }
    s << "; corpus: " << converted << " verdicts converted by 20 samples, " << unsound << " unsound";
    r.pass = problems.empty();
    r.summary = s.str();
    r.notes = problems;
    return r;
}

Result a7() {
    Result r;
    constexpr std::size_t kCases = 10000;
    struct Campaign {
        const char* name;
        props::Outcome (*fn)(std::size_t, std::uint64_t);
    };
    const Campaign campaigns[] = {
        {"det-validity", props::det_validity},
        {"quotient-acyclic", props::quotient_acyclicity},
        {"path-shapes", props::path_shapes},
        {"cycle-bruteforce", props::cycle_bruteforce},
        {"boxminus", props::boxminus_algebra},
        {"walk-increase", props::walk_increase},
        {"walk-decrease", props::walk_decrease},
        {"scc-closure", props::scc_equivalence},
        {"roundtrip", props::serializer_roundtrip},
        {"fmp-algebra", props::fmp_algebra},
        {"graph-helpers", props::graph_helpers},
    };
    std::ostringstream s;
    std::size_t failures = 0;
    std::uint64_t seed = 9001;
    for (const auto& c : campaigns) {
        const props::Outcome o = c.fn(kCases, seed++);
        failures += o.failures.size();
        s << " " << c.name << "=" << o.cases - o.skipped << "/" << o.cases;
        if (o.checks > 0) s << "(" << o.checks << " walks)";
        if (!o.ok()) {
            r.notes.push_back(std::string(c.name) + ": " + std::to_string(o.failures.size()) + " failures; first: " +
                              o.failures.front());
        }
        if (o.cases != kCases) failures += 1;
    }
    r.pass = failures == 0;
    r.summary = std::to_string(failures) + " failures;" + s.str();
    return r;
}

Result a8() {
    Result r;
    std::size_t sieve_terminating = 0, violations = 0;
    for (std::size_t i = 0; i < corpus().size(); ++i) {
        const auto& e = corpus()[i];
        if (e.sieve.kind != VerdictKind::terminating) continue;
        ++sieve_terminating;
        if (e.sampled.kind != VerdictKind::terminating) {
            ++violations;
            r.notes.push_back("corpus index " + std::to_string(i) + " sieve terminating, hsieve " +
                              hsieve::to_string(e.sampled.kind) + "(" + e.sampled.detail + "): " +
                              dump_instance("a8_violation_" + std::to_string(i), e.fmp));
        }
    }
    std::size_t extra_sieve = 0, extra_violations = 0;
    for (std::size_t i = 0; i < multi_scc_corpus().size(); ++i) {
        const auto& e = multi_scc_corpus()[i];
        if (e.sieve.kind != VerdictKind::terminating) continue;
        ++extra_sieve;
        if (e.sampled.kind != VerdictKind::terminating) {
            ++extra_violations;
            r.notes.push_back("multi-SCC index " + std::to_string(i) + ": " +
                              dump_instance("a8_multiscc_violation_" + std::to_string(i), e.fmp));
        }
    }
    r.pass = violations == 0 && extra_violations == 0;
    r.summary = std::to_string(sieve_terminating) + " sieve-terminating policies of " + std::to_string(corpus().size()) +
                ", " + std::to_string(violations) + " not terminating under 20-sample hsieve; multi-SCC set: " +
                std::to_string(extra_sieve) + " sieve-terminating, " + std::to_string(extra_violations) + " violations";
    return r;
}

} // namespace

int main(int argc, char** argv) {
    std::set<std::string> only(argv + 1, argv + argc);
    const std::vector<Criterion> criteria{{"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},
                                          {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8}};
    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.contains(c.id)) continue;
        const auto t0 = Clock::now();
        Result r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r.pass = false;
            r.summary = std::string("exception: ") + e.what();
        }
        std::cout << c.id << " " << (r.pass ? "PASS" : "FAIL") << " " << r.summary << " [" << seconds_since(t0) << " s]\n";
        for (const auto& n : r.notes) std::cout << "    " << n << "\n";
        std::cout.flush();
        if (!r.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
