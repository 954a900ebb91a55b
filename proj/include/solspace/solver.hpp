#pragma once

// Largest-box search: maximize the normalized volume of an axis-aligned box
// whose sampled interior meets every requirement. Two phases:
//   I  explore      sample, classify, trim, grow; growth decays on stagnation
//   II consolidate  sample, classify, trim until a batch is entirely good

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "solspace/box.hpp"
#include "solspace/problem.hpp"

namespace solspace {

struct SolverParams {
  std::size_t n_samples = 100;
  double growth = 1.3;
  double growth_decay = 0.8;  // applied to (factor - 1) on each stagnant iteration
  std::size_t phase1_max_iters = 50;
  std::size_t phase2_max_iters = 20;
  double stagnation_tol = 1e-3;
  std::size_t stagnation_window = 3;
  double seed_box_fraction = 0.01;  // initial box width, fraction of design-space width
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless n_samples >= 10, growth > 1 and
  /// growth_decay in (0, 1).
  void check() const;

  friend bool operator==(const SolverParams&, const SolverParams&) = default;
};

enum class Phase { explore, consolidate };
std::string_view to_string(Phase phase);

struct TraceRecord {
  Phase phase = Phase::explore;
  std::size_t iteration = 0;
  double mu = 0.0;
  double bad_fraction = 0.0;
  Box box;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using SolverTrace = std::vector<TraceRecord>;

struct SolveResult {
  Box box;
  SolverTrace trace;
};

/// Classifies every point against the problem's requirements, evaluating in
/// parallel but returning results in input order.
std::vector<ClassifiedSample> classify_batch(const Problem& problem, std::vector<DesignPoint> points);

/// Throws InfeasibleSeedError when seed_point is bad. The returned box need
/// not contain seed_point.
SolveResult solve_box(const Problem& problem, const DesignPoint& seed_point, const SolverParams& params);

struct Validation {
  double purity = 1.0;
  std::size_t n = 0;
  std::size_t good = 0;
  bool no_samples = false;  // n == 0: purity reported as 1.0
};

/// Fraction of n fresh uniform in-box samples that classify good.
Validation validate_box(const Problem& problem, const Box& box, std::size_t n, std::uint64_t seed);

/// Pins one DV to new_interval (nested in its current interval) and
/// re-solves the remaining DVs starting from the restricted box. Throws
/// TradeoffError for an unknown DV, a non-nested or inverted interval, or a
/// restricted box whose first batch holds no good sample.
SolveResult restrict_and_resolve(const Problem& problem, const Box& box, std::string_view dv,
                                 Interval new_interval, const SolverParams& params);

nlohmann::json to_json(const SolverParams& p);
SolverParams solver_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SolverTrace& trace);
SolverTrace trace_from_json(const nlohmann::json& j);

}  // namespace solspace
