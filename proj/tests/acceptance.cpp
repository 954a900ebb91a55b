// Acceptance checks: one PASS/FAIL line per check, nonzero exit on any failure.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "solspace/arm.hpp"
#include "solspace/cli.hpp"
#include "solspace/rng.hpp"
#include "solspace/sections.hpp"
#include "solspace/workflow.hpp"

using namespace solspace;
namespace fs = std::filesystem;

namespace {

const fs::path kProblems = SOLSPACE_PROBLEMS_DIR;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
  std::fflush(stdout);
}

std::string format(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"solspace"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run_command(static_cast<int>(argv.size()), argv.data(), out, err);
}

// Arm pipeline shared by criteria 3, 4 and 8.
struct ArmRun {
  Problem bound;
  BaselineResult baseline;
  Box box;
  double purity;
  double seconds;
};

std::optional<ArmRun> arm_run;

const ArmRun& solve_arm() {
  if (arm_run) return *arm_run;
  const auto t0 = std::chrono::steady_clock::now();
  const Problem p = Problem::load(kProblems / "arm.json");
  BaselineResult b = optimize_baseline(p, p.baseline_config().weights, 2000, 0);
  Problem bound = bind_requirements(p, b);
  const SolveResult r = solve_box(bound, b.x_baseline, SolverParams{});
  const double purity = validate_box(bound, r.box, 2000, 1).purity;
  arm_run = ArmRun{bound, b, r.box, purity, seconds_since(t0)};
  return *arm_run;
}

}  // namespace

int main() {
  report(1, "analytic-box optimality", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const Problem p = Problem::load(kProblems / "toy_sum.json");
    const SolveResult r = solve_box(p, DesignPoint({0.25, 0.25}), SolverParams{});
    const double m = mu(r.box, p.variables());
    const double purity = validate_box(p, r.box, 10000, 1).purity;
    const double s = seconds_since(t0);
    return Outcome{m >= 0.225 && purity >= 0.99 && s < 5.0,
                   format("mu=%.4f (>= 0.225), purity=%.4f (>= 0.99), %.2f s (< 5 s)", m, purity, s)};
  });

  report(2, "separable toy intervals", [] {
    const Problem p = Problem::load(kProblems / "toy_separable.json");
    const SolveResult r = solve_box(p, DesignPoint({0.25, 0.25}), SolverParams{});
    bool ok = true;
    for (std::size_t i = 0; i < 2; ++i) {
      ok = ok && std::abs(r.box[i].lower - 0.0) <= 0.05 && std::abs(r.box[i].upper - 0.5) <= 0.05;
    }
    return Outcome{ok, format("x1=[%.4f, %.4f], x2=[%.4f, %.4f] (each within 0.05 of [0, 0.5])", r.box[0].lower,
                              r.box[0].upper, r.box[1].lower, r.box[1].upper)};
  });

  report(3, "arm co-design", [] {
    const ArmRun& a = solve_arm();
    const bool feasible = a.bound.evaluate(a.baseline.x_baseline).feasible();
    const double m = mu(a.box, a.bound.variables());
    const bool ok = feasible && a.baseline.evaluations_used <= 2000 && m > 0.0 && a.purity >= 0.98 &&
                    a.seconds < 600.0;
    return Outcome{ok, format("baseline feasible=%s after %zu evals (t_cyc=%.4g s, L=%.4g J), mu=%.3g (> 0), "
                              "purity=%.4f (>= 0.98), %.1f s (< 600 s)",
                              feasible ? "yes" : "no", a.baseline.evaluations_used, a.baseline.qois.at("t_cyc"),
                              a.baseline.qois.at("L"), m, a.purity, a.seconds)};
  });

  report(4, "control/mechanics decoupling", [] {
    const ArmRun& a = solve_arm();
    const auto& vars = a.bound.variables();
    Rng control_rng(41), other_rng(42);
    std::size_t good = 0;
    const std::size_t n = 500;
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<double> x(vars.size());
      for (std::size_t i = 0; i < vars.size(); ++i) {
        Rng& r = vars[i].kind == DvKind::control ? control_rng : other_rng;
        x[i] = r.uniform(a.box[i].lower, a.box[i].upper);
      }
      good += a.bound.classify(DesignPoint(x)).good() ? 1 : 0;
    }
    const double f = static_cast<double>(good) / n;
    return Outcome{f >= 0.98, format("%zu/%zu recombined designs good, frequency=%.4f (>= 0.98)", good, n, f)};
  });

  report(5, "trade-off on the sum toy", [] {
    const Problem p = Problem::load(kProblems / "toy_sum.json");
    const SolveResult base = solve_box(p, DesignPoint({0.25, 0.25}), SolverParams{});
    const SolveResult r = restrict_and_resolve(p, base.box, "x1", {0.0, 0.2}, SolverParams{});
    const double upper = r.box[1].upper;
    const double purity = validate_box(p, r.box, 10000, 1).purity;
    return Outcome{upper >= 0.75 && r.box[0] == Interval{0.0, 0.2},
                   format("x1 pinned to [%.3g, %.3g], x2=[%.4f, %.4f] (upper >= 0.75, optimum 0.8), purity=%.4f",
                          r.box[0].lower, r.box[0].upper, r.box[1].lower, upper, purity)};
  });

  report(6, "simulator physics", [] {
    using namespace solspace::arm;
    const double x[] = {0.35, 0.3, 0.5, 0.5, 20.0, 8.0, 150.0, 15.0, 80.0, 6.0};
    const ArmParams p = arm_params_from(x, Constants{});

    double drift = 0.0;
    for (const ArmState s0 : {ArmState{{0.3, 0.5}, {1.0, -1.0}}, ArmState{{1.2, 2.0}, {0.0, 0.0}}}) {
      const double e0 = total_energy(p, s0.q, s0.qd);
      ArmState s = s0;
      for (int k = 0; k < 1000; ++k) {
        s = rk4_step(p, s, {0.0, 0.0}, 1e-3);
        drift = std::max(drift, std::abs(total_energy(p, s.q, s.qd) - e0) / std::abs(e0));
      }
    }

    // dE/dt along the instantaneous flow against tau . qd on driven rollouts.
    double power_err = 0.0;
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int roll = 0; roll < 5; ++roll) {
      const Joint2 tau{15.0 * u(rng), 6.0 * u(rng)};
      ArmState s{{u(rng), 1.5 + u(rng)}, {u(rng), u(rng)}};
      std::vector<ArmState> states{s};
      for (int k = 0; k < 300; ++k) states.push_back(s = rk4_step(p, s, tau, 1e-3));
      double max_power = 0.0;
      for (const auto& st : states) max_power = std::max(max_power, std::abs(tau[0] * st.qd[0] + tau[1] * st.qd[1]));
      for (const auto& st : states) {
        const auto qdd = dynamics_accel(p, st.q, st.qd, tau);
        const double h = 1e-6;
        auto energy_at = [&](double eps) {
          return total_energy(p, {st.q[0] + eps * st.qd[0], st.q[1] + eps * st.qd[1]},
                              {st.qd[0] + eps * qdd[0], st.qd[1] + eps * qdd[1]});
        };
        const double de = (energy_at(h) - energy_at(-h)) / (2 * h);
        const double power = tau[0] * st.qd[0] + tau[1] * st.qd[1];
        power_err = std::max(power_err, std::abs(de - power) / std::max(std::abs(power), 1e-3 * max_power));
      }
    }

    double ik_err = 0.0;
    std::uniform_real_distribution<double> len(0.25, 0.5), v(0.0, 1.0);
    for (int k = 0; k < 10000; ++k) {
      ArmParams q;
      q.l1 = len(rng);
      q.l2 = len(rng);
      const double inner = std::abs(q.l1 - q.l2), outer = q.l1 + q.l2;
      const double r = inner + (outer - inner) * (1e-6 + (1.0 - 2e-6) * v(rng));
      const double ang = 2.0 * std::numbers::pi * v(rng);
      const Vec2 t{r * std::cos(ang), r * std::sin(ang)};
      const Vec2 back = forward_kinematics(q, inverse_kinematics(q, t));
      ik_err = std::max(ik_err, std::hypot(back.x - t.x, back.y - t.y));
    }
    return Outcome{drift <= 1e-6 && power_err <= 1e-3 && ik_err <= 1e-9,
                   format("energy drift=%.2e (<= 1e-6), power balance=%.2e (<= 1e-3), IK/FK=%.2e m (<= 1e-9)",
                          drift, power_err, ik_err)};
  });

  report(7, "CLI determinism", [] {
    const fs::path root = fs::temp_directory_path() / ("solspace_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const std::string problem = (kProblems / "arm.json").string();
    bool codes = true;
    for (const char* run : {"a", "b"}) {
      const std::string out = (root / run).string();
      codes = codes && cli({"baseline", "--problem", problem, "--out", out, "--seed", "7"}) == 0;
      codes = codes && cli({"solve", "--problem", problem, "--out", out, "--seed", "7"}) == 0;
    }
    bool same = true;
    for (const char* f : {"baseline.json", "box.json", "trace.json"}) {
      same = same && slurp(root / "a" / f) == slurp(root / "b" / f) && !slurp(root / "a" / f).empty();
    }
    fs::remove_all(root);
    return Outcome{codes && same, format("exit codes ok=%s, baseline.json/box.json/trace.json identical=%s",
                                         codes ? "yes" : "no", same ? "yes" : "no")};
  });

  report(8, "section consistency", [] {
    const ArmRun& a = solve_arm();
    const Problem& p = a.bound;
    const std::size_t l2 = *p.index_of("l2"), r_mot = *p.index_of("r_mot"), m_mot = *p.index_of("m_mot");
    const std::size_t tau1 = *p.index_of("tau1_max"), kp1 = *p.index_of("kp1"), kd1 = *p.index_of("kd1");
    const std::pair<std::size_t, std::size_t> pairs[] = {{tau1, m_mot}, {kp1, kd1}, {l2, r_mot}};
    std::size_t checked = 0, mismatched = 0, inside = 0, inside_good = 0;
    for (const auto& [i, j] : pairs) {
      for (Span span : {Span::design_space, Span::box}) {
        const SectionData s = make_section(p, a.box, i, j, 2000, 3, span);
        const SectionData exported =
            section_from_json(nlohmann::json::parse(export_section(s, SectionFormat::json)));
        for (const auto& pt : exported.points) {
          ++checked;
          if (!(p.classify(pt.design) == pt.classification)) ++mismatched;
          if (s.rect_i.contains(pt.design[i]) && s.rect_j.contains(pt.design[j]) && a.box.contains(pt.design)) {
            ++inside;
            inside_good += pt.classification.good() ? 1 : 0;
          }
        }
      }
    }
    const double f = inside ? static_cast<double>(inside_good) / inside : 0.0;
    return Outcome{mismatched == 0 && inside >= 2000 && f >= a.purity - 0.02,
                   format("%zu points re-classified, %zu mismatches; in-box good frequency=%.4f over %zu points "
                          "(>= purity %.4f - 0.02)",
                          checked, mismatched, f, inside, a.purity)};
  });

  std::printf("%s\n", failures == 0 ? "all primary criteria passed" : "some primary criteria failed");
  return failures == 0 ? 0 : 1;
}
