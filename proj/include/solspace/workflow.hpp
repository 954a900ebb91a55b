#pragma once

// Glue shared by the CLI, the server and the Python module: binding
// requirements to a baseline and summarising a solved box.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "solspace/baseline.hpp"
#include "solspace/problem.hpp"
#include "solspace/run_io.hpp"
#include "solspace/solver.hpp"

namespace solspace {

inline constexpr std::size_t kDefaultValidationSamples = 2000;

/// The problem's own requirements when it lists any, otherwise one
/// requirement per QoI with the baseline value as threshold.
Problem bind_requirements(const Problem& problem, const BaselineResult& baseline);

/// Literal baseline x from the problem file when present, otherwise the
/// evolution strategy with the configured weights and budget.
BaselineResult compute_baseline(const Problem& problem, std::uint64_t seed,
                                std::optional<std::size_t> budget = std::nullopt);

/// box.json record for a solved box; purity from validate_box(n, seed).
BoxFile summarize_box(const Problem& bound, const Box& box, const SolverParams& params,
                      std::size_t validation_samples = kDefaultValidationSamples);

}  // namespace solspace
