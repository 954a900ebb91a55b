#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "solspace/design.hpp"
#include "solspace/errors.hpp"
#include "solspace/problem.hpp"

namespace solspace {

using Weights = std::map<std::string, double>;

/// Finite penalty added once per violated feasibility condition.
inline constexpr double kInfeasiblePenalty = 1e9;

/// Sum of w_q * qoi_q over defined QoIs, plus kInfeasiblePenalty for an
/// unreachable/failed design and again for a timed-out one.
double scalarize(const Evaluation& evaluation, const Weights& weights);

struct BaselineResult {
  DesignPoint x_baseline;
  std::map<std::string, double> qois;
  double objective = 0.0;
  std::size_t evaluations_used = 0;
  std::uint64_t seed = 0;
  std::vector<double> history;  // incumbent objective after each generation

  friend bool operator==(const BaselineResult&, const BaselineResult&) = default;
};

class NoFeasibleBaselineError : public DomainFailure {
 public:
  NoFeasibleBaselineError(DesignPoint best, double objective);
  const DesignPoint& best_candidate() const { return best_; }
  double objective() const { return objective_; }

 private:
  DesignPoint best_;
  double objective_;
};

/// (1+lambda) evolution strategy with per-DV Gaussian steps scaled to the
/// design-space width.
struct EsParams {
  std::size_t population = 16;
  double initial_step = 0.25;  // fraction of design-space width
  double shrink = 0.7;
  std::size_t stagnation_generations = 5;
};

/// Deterministic given seed. Runs floor(budget / population) full
/// generations; the first is centred on the design-space midpoint.
/// Throws std::invalid_argument if budget < population and
/// NoFeasibleBaselineError if no sampled design was feasible.
BaselineResult optimize_baseline(const Problem& problem, const Weights& weights, std::size_t budget,
                                 std::uint64_t seed, const EsParams& es = {});

/// Baseline from a literal design point (reference-design entry path).
BaselineResult baseline_from_point(const Problem& problem, const DesignPoint& x, const Weights& weights);

/// One less_equal requirement per QoI, thresholds equal to the baseline
/// values, ids equal to the QoI names. QoIs listed in qoi_order come first,
/// in that order; the rest follow by name.
std::vector<Requirement> derive_requirements(const BaselineResult& baseline,
                                             std::span<const std::string> qoi_order = {});

nlohmann::json to_json(const BaselineResult& b);
BaselineResult baseline_from_json(const nlohmann::json& j);

}  // namespace solspace
