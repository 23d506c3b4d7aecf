#pragma once

// DOT rendering, random policy generation and trace documents.

#include "hsieve/analysis.hpp"
#include "hsieve/decomposition.hpp"
#include "hsieve/fmp.hpp"
#include "hsieve/oracle.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace hsieve {

// Graphviz digraph of the policy. Edges are labeled with their effects as
// "x-1, y+2" (guards, when present, prefixed in brackets).
std::string export_dot(const Fmp& fmp);

// One DOT node per DET node, labeled "({q0, q1}, q0)".
std::string export_def_dot(const DefForest& forest);

struct GenSpec {
    std::size_t n_qstates = 1;
    std::size_t n_vars = 1;
    double edge_density = 0.4;
    Value max_abs_delta = 1;
    std::uint64_t seed = 0;
};

// Random normalized policy: qstates q0..q{n-1}, variables x0..x{v-1},
// ceil(density * n^2) edges on distinct (src, dst) pairs including a
// spanning arborescence from q0, and effects on one or two variables drawn
// uniformly from [-max_abs_delta, max_abs_delta] \ {0}. Default guards only.
// Throws std::invalid_argument("infeasible-spec") when the parameters
// cannot be met.
Fmp generate_random(const GenSpec& spec);

// Trace document: verdict, detail, seeds, iterations, wall_ms, plus the
// config echo and per-root detail.
nlohmann::ordered_json report_to_json(const AnalysisReport& report);

// The same document without wall_ms, for byte-level comparison of runs.
nlohmann::ordered_json report_to_json_stable(const AnalysisReport& report);

nlohmann::ordered_json forest_to_json(const DefForest& forest);

nlohmann::ordered_json explore_to_json(const ExploreResult& result);

} // namespace hsieve
