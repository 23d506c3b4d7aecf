#pragma once

// Randomized property campaigns. Each returns the list of failure messages
// (empty on success) so that both the ctest suites and the acceptance runner
// can use them with different case counts.

#include "hsieve/fmp.hpp"
#include "hsieve/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace props {

struct Outcome {
    std::size_t cases = 0;
    std::size_t skipped = 0; // e.g. path cap reached
    std::size_t checks = 0;  // individual assertions evaluated
    std::vector<std::string> failures;
    [[nodiscard]] bool ok() const { return failures.empty(); }
};

// Random normalized policy with default guards, possibly disconnected, on
// q0..q{n-1} with variables x0..; zero-effect edges allowed.
hsieve::Fmp random_policy(hsieve::Rng& rng, std::size_t max_qstates, std::size_t max_vars, hsieve::Value max_delta);

// Random policy exercising every field of the file format (bounds, guards,
// labels, multi-action edges, terminal set, goal). Valid but not normalized.
hsieve::Fmp random_rich_policy(hsieve::Rng& rng);

Outcome det_validity(std::size_t cases, std::uint64_t seed);
Outcome quotient_acyclicity(std::size_t cases, std::uint64_t seed);
Outcome path_shapes(std::size_t cases, std::uint64_t seed);
Outcome cycle_bruteforce(std::size_t cases, std::uint64_t seed);
Outcome boxminus_algebra(std::size_t cases, std::uint64_t seed);
Outcome walk_increase(std::size_t cases, std::uint64_t seed);
Outcome walk_decrease(std::size_t cases, std::uint64_t seed);
Outcome scc_equivalence(std::size_t cases, std::uint64_t seed);
Outcome serializer_roundtrip(std::size_t cases, std::uint64_t seed);
Outcome fmp_algebra(std::size_t cases, std::uint64_t seed);
Outcome graph_helpers(std::size_t cases, std::uint64_t seed);

} // namespace props
