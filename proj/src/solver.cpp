#include "solspace/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "solspace/errors.hpp"
#include "solspace/parallel.hpp"

namespace solspace {

namespace {

std::string format_interval(Interval iv) {
  return "[" + std::to_string(iv.lower) + ", " + std::to_string(iv.upper) + "]";
}

struct BatchOutcome {
  Box box;
  std::size_t good = 0;
  std::size_t bad = 0;
};

// The anchor, when given, is a known-good design appended to the trim
// samples; it is not counted in the batch statistics.
BatchOutcome sample_and_trim(const Problem& problem, const Box& box, const SolverParams& params,
                             std::span<const bool> frozen, Rng& rng, const DesignPoint* anchor) {
  auto samples = classify_batch(problem, sample_uniform(box, params.n_samples, rng));
  BatchOutcome out;
  for (const auto& s : samples) (s.good ? out.good : out.bad)++;
  if (anchor != nullptr && box.contains(*anchor)) samples.push_back({*anchor, true});
  out.box = trim(box, samples, problem.variables(), frozen);
  return out;
}

SolveResult run_phases(const Problem& problem, Box box, const SolverParams& params,
                       std::span<const bool> frozen, const DesignPoint* anchor,
                       bool require_initial_good) {
  params.check();
  const auto& vars = problem.variables();
  Rng rng(params.seed);
  SolveResult result;
  auto record = [&](Phase phase, std::size_t it, const BatchOutcome& b) {
    const double total = static_cast<double>(b.good + b.bad);
    result.trace.push_back({phase, it, mu(b.box, vars), total > 0 ? b.bad / total : 0.0, b.box});
  };

  double factor = params.growth;
  double previous_mu = mu(box, vars);
  std::size_t stagnant = 0;
  for (std::size_t it = 0; it < params.phase1_max_iters; ++it) {
    BatchOutcome b = sample_and_trim(problem, box, params, frozen, rng, anchor);
    if (it == 0 && require_initial_good && b.good == 0) {
      throw TradeoffError("restricted box contains no good design in the first sample batch");
    }
    box = b.box;
    record(Phase::explore, it, b);
    const double current_mu = result.trace.back().mu;
    const double change = std::abs(current_mu - previous_mu) /
                          std::max(previous_mu, std::numeric_limits<double>::min());
    if (change < params.stagnation_tol) {
      ++stagnant;
      factor = 1.0 + (factor - 1.0) * params.growth_decay;
    } else {
      stagnant = 0;
      // A batch without a single good design means the box is already
      // larger than the good region it sits in.
      if (b.good == 0) factor = 1.0 + (factor - 1.0) * params.growth_decay;
    }
    previous_mu = current_mu;
    if (stagnant >= params.stagnation_window) break;
    box = grow(box, factor, vars, frozen);
  }

  for (std::size_t it = 0; it < params.phase2_max_iters; ++it) {
    BatchOutcome b = sample_and_trim(problem, box, params, frozen, rng, anchor);
    box = b.box;
    record(Phase::consolidate, it, b);
    if (b.bad == 0) break;
  }
  result.box = std::move(box);
  return result;
}

}  // namespace

void SolverParams::check() const {
  if (n_samples < 10) throw std::invalid_argument("n_samples must be at least 10");
  if (!(growth > 1.0)) throw std::invalid_argument("growth must exceed 1");
  if (!(growth_decay > 0.0 && growth_decay < 1.0)) {
    throw std::invalid_argument("growth_decay must lie in (0, 1)");
  }
  if (!(seed_box_fraction > 0.0 && seed_box_fraction <= 1.0)) {
    throw std::invalid_argument("seed_box_fraction must lie in (0, 1]");
  }
}

std::string_view to_string(Phase phase) { return phase == Phase::explore ? "explore" : "consolidate"; }

std::vector<ClassifiedSample> classify_batch(const Problem& problem, std::vector<DesignPoint> points) {
  std::vector<ClassifiedSample> out(points.size());
  parallel_for(points.size(), [&](std::size_t k) {
    out[k].good = problem.classify(points[k]).good();
    out[k].point = std::move(points[k]);
  });
  return out;
}

SolveResult solve_box(const Problem& problem, const DesignPoint& seed_point, const SolverParams& params) {
  const Classification c = problem.classify(seed_point);
  if (!c.good()) throw InfeasibleSeedError({c.violated.begin(), c.violated.end()});

  const auto& vars = problem.variables();
  std::vector<Interval> iv(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const double half = 0.5 * params.seed_box_fraction * vars[i].width();
    iv[i] = {std::max(vars[i].ds_lower, seed_point[i] - half),
             std::min(vars[i].ds_upper, seed_point[i] + half)};
  }
  return run_phases(problem, Box(std::move(iv)), params, {}, &seed_point, false);
}

Validation validate_box(const Problem& problem, const Box& box, std::size_t n, std::uint64_t seed) {
  Validation v;
  v.n = n;
  if (n == 0) {
    v.no_samples = true;
    return v;
  }
  Rng rng(seed);
  const auto samples = classify_batch(problem, sample_uniform(box, n, rng));
  v.good = static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(),
                                                  [](const ClassifiedSample& s) { return s.good; }));
  v.purity = static_cast<double>(v.good) / static_cast<double>(n);
  return v;
}

SolveResult restrict_and_resolve(const Problem& problem, const Box& box, std::string_view dv,
                                 Interval new_interval, const SolverParams& params) {
  const auto index = problem.index_of(dv);
  if (!index) throw TradeoffError("unknown design variable '" + std::string(dv) + "'");
  if (!(new_interval.lower <= new_interval.upper)) {
    throw TradeoffError("interval " + format_interval(new_interval) + " for '" + std::string(dv) +
                        "' has lower above upper");
  }
  const Interval current = box[*index];
  if (new_interval.lower < current.lower || new_interval.upper > current.upper) {
    throw TradeoffError("interval " + format_interval(new_interval) + " for '" + std::string(dv) +
                        "' is not nested in the current interval " + format_interval(current));
  }
  Box restricted = box;
  restricted[*index] = new_interval;
  // std::vector<bool> has no contiguous storage to span over.
  auto frozen = std::make_unique<bool[]>(box.dimension());
  frozen[*index] = true;
  return run_phases(problem, std::move(restricted), params,
                    std::span<const bool>(frozen.get(), box.dimension()), nullptr, true);
}

nlohmann::json to_json(const SolverParams& p) {
  return {{"n_samples", p.n_samples},
          {"growth", p.growth},
          {"growth_decay", p.growth_decay},
          {"phase1_max_iters", p.phase1_max_iters},
          {"phase2_max_iters", p.phase2_max_iters},
          {"stagnation_tol", p.stagnation_tol},
          {"stagnation_window", p.stagnation_window},
          {"seed_box_fraction", p.seed_box_fraction},
          {"seed", p.seed}};
}

SolverParams solver_params_from_json(const nlohmann::json& j) {
  SolverParams p;
  p.n_samples = j.value("n_samples", p.n_samples);
  p.growth = j.value("growth", p.growth);
  p.growth_decay = j.value("growth_decay", p.growth_decay);
  p.phase1_max_iters = j.value("phase1_max_iters", p.phase1_max_iters);
  p.phase2_max_iters = j.value("phase2_max_iters", p.phase2_max_iters);
  p.stagnation_tol = j.value("stagnation_tol", p.stagnation_tol);
  p.stagnation_window = j.value("stagnation_window", p.stagnation_window);
  p.seed_box_fraction = j.value("seed_box_fraction", p.seed_box_fraction);
  p.seed = j.value("seed", p.seed);
  return p;
}

nlohmann::json to_json(const SolverTrace& trace) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : trace) {
    arr.push_back({{"phase", to_string(r.phase)},
                   {"iteration", r.iteration},
                   {"mu", r.mu},
                   {"bad_fraction", r.bad_fraction},
                   {"box", to_json(r.box)}});
  }
  return arr;
}

SolverTrace trace_from_json(const nlohmann::json& j) {
  SolverTrace trace;
  for (const auto& r : j) {
    TraceRecord rec;
    rec.phase = r.at("phase").get<std::string>() == "explore" ? Phase::explore : Phase::consolidate;
    rec.iteration = r.at("iteration").get<std::size_t>();
    rec.mu = r.at("mu").get<double>();
    rec.bad_fraction = r.at("bad_fraction").get<double>();
    rec.box = box_from_json(r.at("box"));
    trace.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace solspace
