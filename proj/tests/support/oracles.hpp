// SPDX-License-Identifier: Apache-2.0
//
// Slow reference implementations the analyses are checked against.

#pragma once

#include <cstddef>
#include <vector>

#include "solfp/benchmark.hpp"
#include "solfp/model.hpp"

namespace solfp::testing {

using Path = std::vector<const Stmt*>;

/// Every execution path through `body`, as the sequence of statements
/// whose condition or effect is evaluated. Loops run zero, one or two times
/// (a loop without an exit condition is cut after two iterations). Throws
/// std::length_error past `max_paths`.
std::vector<Path> enumerate_paths(const Stmt& body, std::size_t max_paths = 200000);

/// Union of the effects of everything that runs after `site` on some path.
/// Per-statement effects are taken from the function's CFG nodes.
Effects brute_force_after(const FunctionModel& f, const Stmt& site);

/// Reflexive-transitive closure of an adjacency matrix (Warshall).
std::vector<std::vector<bool>> transitive_closure(std::vector<std::vector<bool>> adj);

/// Scores every label by scanning all verdict lines and ranges.
ConfusionMatrix brute_force_evaluate(const EvaluationInput& in, const std::vector<GroundTruthLabel>& labels,
                                     VulnClass vuln);

}  // namespace solfp::testing
