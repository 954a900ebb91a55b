#include "solspace/baseline.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "solspace/parallel.hpp"
#include "solspace/rng.hpp"

namespace solspace {

namespace {

bool fully_feasible(const Evaluation& e) {
  if (!e.feasible()) return false;
  return std::all_of(e.qois.begin(), e.qois.end(), [](const auto& kv) { return kv.second.has_value(); });
}

struct Scored {
  DesignPoint x;
  Evaluation evaluation;
  double objective = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

// Feasible designs always rank before infeasible ones.
bool better(const Scored& a, const Scored& b) {
  if (a.feasible != b.feasible) return a.feasible;
  return a.objective < b.objective;
}

std::map<std::string, double> defined_qois(const Evaluation& e) {
  std::map<std::string, double> out;
  for (const auto& [name, v] : e.qois) {
    if (v) out[name] = *v;
  }
  return out;
}

}  // namespace

double scalarize(const Evaluation& evaluation, const Weights& weights) {
  double total = 0.0;
  for (const auto& [qoi, w] : weights) {
    auto it = evaluation.qois.find(qoi);
    if (it != evaluation.qois.end() && it->second) total += w * *it->second;
  }
  if (evaluation.infeasible_reason) total += kInfeasiblePenalty;
  if (evaluation.timed_out) total += kInfeasiblePenalty;
  return total;
}

NoFeasibleBaselineError::NoFeasibleBaselineError(DesignPoint best, double objective)
    : DomainFailure("no feasible baseline design found within the evaluation budget"),
      best_(std::move(best)),
      objective_(objective) {}

BaselineResult optimize_baseline(const Problem& problem, const Weights& weights, std::size_t budget,
                                 std::uint64_t seed, const EsParams& es) {
  if (es.population == 0 || budget < es.population) {
    throw std::invalid_argument("baseline budget must be at least the population size");
  }
  const auto& vars = problem.variables();
  const std::size_t d = vars.size();
  Rng rng(seed);

  std::vector<double> mean(d), step(d);
  for (std::size_t i = 0; i < d; ++i) {
    mean[i] = 0.5 * (vars[i].ds_lower + vars[i].ds_upper);
    step[i] = es.initial_step * vars[i].width();
  }

  Scored best;
  bool have_best = false;
  std::size_t stagnant = 0;
  BaselineResult result;
  result.seed = seed;
  const std::size_t generations = budget / es.population;

  std::vector<Scored> pop(es.population);
  for (std::size_t g = 0; g < generations; ++g) {
    for (auto& cand : pop) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = std::clamp(mean[i] + step[i] * rng.normal(), vars[i].ds_lower, vars[i].ds_upper);
      }
      cand.x = DesignPoint(std::move(x));
    }
    parallel_for(pop.size(), [&](std::size_t k) {
      pop[k].evaluation = problem.evaluate(pop[k].x);
      pop[k].objective = scalarize(pop[k].evaluation, weights);
      pop[k].feasible = fully_feasible(pop[k].evaluation);
    });
    result.evaluations_used += pop.size();

    bool improved = false;
    for (const auto& cand : pop) {
      if (!have_best || better(cand, best)) {
        best = cand;
        have_best = true;
        improved = true;
      }
    }
    if (improved) {
      stagnant = 0;
    } else if (++stagnant >= es.stagnation_generations) {
      for (auto& s : step) s *= es.shrink;
      stagnant = 0;
    }
    mean = best.x.vector();
    result.history.push_back(best.objective);
  }

  if (!best.feasible) throw NoFeasibleBaselineError(best.x, best.objective);
  result.x_baseline = best.x;
  result.qois = defined_qois(best.evaluation);
  result.objective = best.objective;
  return result;
}

BaselineResult baseline_from_point(const Problem& problem, const DesignPoint& x, const Weights& weights) {
  const Evaluation e = problem.evaluate(x);
  if (!fully_feasible(e)) throw NoFeasibleBaselineError(x, scalarize(e, weights));
  BaselineResult r;
  r.x_baseline = x;
  r.qois = defined_qois(e);
  r.objective = scalarize(e, weights);
  r.evaluations_used = 1;
  return r;
}

std::vector<Requirement> derive_requirements(const BaselineResult& baseline,
                                             std::span<const std::string> qoi_order) {
  std::vector<Requirement> out;
  for (const auto& qoi : qoi_order) {
    auto it = baseline.qois.find(qoi);
    if (it != baseline.qois.end()) out.push_back({qoi, qoi, Comparator::less_equal, it->second});
  }
  for (const auto& [qoi, value] : baseline.qois) {
    if (std::find(qoi_order.begin(), qoi_order.end(), qoi) == qoi_order.end()) {
      out.push_back({qoi, qoi, Comparator::less_equal, value});
    }
  }
  return out;
}

nlohmann::json to_json(const BaselineResult& b) {
  return {{"x_baseline", b.x_baseline.vector()},
          {"qois", b.qois},
          {"objective", b.objective},
          {"evaluations_used", b.evaluations_used},
          {"seed", b.seed},
          {"history", b.history}};
}

BaselineResult baseline_from_json(const nlohmann::json& j) {
  BaselineResult b;
  b.x_baseline = DesignPoint(j.at("x_baseline").get<std::vector<double>>());
  b.qois = j.at("qois").get<std::map<std::string, double>>();
  b.objective = j.at("objective").get<double>();
  b.evaluations_used = j.at("evaluations_used").get<std::size_t>();
  b.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("history")) b.history = j["history"].get<std::vector<double>>();
  return b;
}

}  // namespace solspace
