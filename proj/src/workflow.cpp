#include "solspace/workflow.hpp"

namespace solspace {

Problem bind_requirements(const Problem& problem, const BaselineResult& baseline) {
  if (!problem.requirements().empty()) return problem;
  return problem.with_requirements(derive_requirements(baseline, problem.qoi_order()));
}

BaselineResult compute_baseline(const Problem& problem, std::uint64_t seed, std::optional<std::size_t> budget) {
  const auto& cfg = problem.baseline_config();
  if (cfg.x) {
    BaselineResult b = baseline_from_point(problem, *cfg.x, cfg.weights);
    b.seed = seed;
    return b;
  }
  return optimize_baseline(problem, cfg.weights, budget.value_or(cfg.budget), seed);
}

BoxFile summarize_box(const Problem& bound, const Box& box, const SolverParams& params,
                      std::size_t validation_samples) {
  const Validation v = validate_box(bound, box, validation_samples, params.seed);
  BoxFile f;
  f.box = box;
  f.mu = mu(box, bound.variables());
  f.purity = v.purity;
  f.validation_samples = v.n;
  f.seed = params.seed;
  f.params = params;
  f.requirements = bound.requirements();
  return f;
}

}  // namespace solspace
