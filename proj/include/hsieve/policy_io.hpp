#pragma once

// JSON policy documents.
//
//   {
//     "format_version": 1,
//     "variables": [{"name": "x", "lower_bound": 0}],
//     "qstates": ["q0", "q1"],
//     "initial": "q0",
//     "edges": [{"id": "e1", "from": "q0", "to": "q1",
//                "guard": [{"var": "x", "min": 1, "max": 5}],
//                "effects": {"x": -1}, "label": "dec"}],
//     "terminal": ["q1"],
//     "goal": {"x": [0, 0]}
//   }
//
// `guard`, `label`, `terminal`, `goal` and `lower_bound` are optional; so is
// `max` in a guard conjunct and the second element of a goal interval.
// `effects` is either one object or an array of objects, the latter giving
// an edge with several alternative actions.

#include "hsieve/fmp.hpp"

#include <string>
#include <string_view>

namespace hsieve {

inline constexpr int kPolicyFormatVersion = 1;

// Throws ParseError. Codes: invalid-json, missing-field:<name>,
// unknown-field:<name>, type-mismatch:<name>, non-integer-effect,
// duplicate-guard-var, unsupported-version.
Fmp parse_policy(std::string_view text);

// Pretty-printed, deterministic. parse_policy(serialize_policy(p)) == p.
std::string serialize_policy(const Fmp& fmp);

Fmp load_policy(const std::string& path);

// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::string& path, std::string_view content);

} // namespace hsieve
