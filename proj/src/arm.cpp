#include "solspace/arm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace solspace::arm {

namespace {

std::string format_target(Vec2 t) {
  return "(" + std::to_string(t.x) + ", " + std::to_string(t.y) + ")";
}

// Lumped inertial parameters of the two bodies about their proximal joints.
struct Lumped {
  double s1;  // first moment of link 1 (+ motor) about joint 1
  double i1;  // inertia of link 1 (+ motor) about joint 1
  double m2;  // mass of link 2 + payload
  double s2;  // first moment of link 2 (+ payload) about joint 2
  double i2;  // inertia of link 2 (+ payload) about joint 2
};

Lumped lump(const ArmParams& p) {
  const double rod1 = p.rho * p.l1;
  const double rod2 = p.rho * p.l2;
  const double motor_arm = p.r_mot * p.l1;
  return {
      rod1 * p.l1 / 2.0 + p.m_mot * motor_arm,
      rod1 * p.l1 * p.l1 / 3.0 + p.m_mot * motor_arm * motor_arm,
      rod2 + p.payload,
      rod2 * p.l2 / 2.0 + p.payload * p.l2,
      rod2 * p.l2 * p.l2 / 3.0 + p.payload * p.l2 * p.l2,
  };
}

struct Derivative {
  Joint2 qd;
  Joint2 qdd;
  double power;
};

Derivative derivative(const ArmParams& p, const ArmState& s, const Joint2& tau) {
  return {s.qd, dynamics_accel(p, s.q, s.qd, tau),
          std::abs(tau[0] * s.qd[0]) + std::abs(tau[1] * s.qd[1])};
}

ArmState advance(const ArmState& s, const Derivative& d, double h) {
  return {{s.q[0] + h * d.qd[0], s.q[1] + h * d.qd[1]},
          {s.qd[0] + h * d.qdd[0], s.qd[1] + h * d.qdd[1]}};
}

// RK4 on the state augmented with consumed energy.
ArmState rk4_with_energy(const ArmParams& p, const ArmState& s, const Joint2& tau, double dt,
                         double& energy) {
  const Derivative k1 = derivative(p, s, tau);
  const Derivative k2 = derivative(p, advance(s, k1, dt / 2.0), tau);
  const Derivative k3 = derivative(p, advance(s, k2, dt / 2.0), tau);
  const Derivative k4 = derivative(p, advance(s, k3, dt), tau);
  ArmState out;
  for (int i = 0; i < 2; ++i) {
    out.q[i] = s.q[i] + dt / 6.0 * (k1.qd[i] + 2.0 * k2.qd[i] + 2.0 * k3.qd[i] + k4.qd[i]);
    out.qd[i] = s.qd[i] + dt / 6.0 * (k1.qdd[i] + 2.0 * k2.qdd[i] + 2.0 * k3.qdd[i] + k4.qdd[i]);
  }
  energy += dt / 6.0 * (k1.power + 2.0 * k2.power + 2.0 * k3.power + k4.power);
  return out;
}

}  // namespace

WorkspaceError::WorkspaceError(Vec2 target)
    : DomainFailure("target " + format_target(target) + " is outside the arm workspace"),
      target_(target) {}

ArmParams ArmParams::with_constants(const Constants& c) {
  ArmParams p;
  p.rho = c.rho;
  p.payload = c.payload;
  p.gravity = c.gravity;
  return p;
}

void ArmParams::check() const {
  const double positive[] = {l1, l2, m_mot, tau1_max, tau2_max, kp1, kd1, kp2, kd2, rho};
  for (double v : positive) {
    if (!(v > 0.0)) throw std::invalid_argument("arm parameters must be strictly positive");
  }
  if (!(r_mot >= 0.0 && r_mot <= 1.0)) throw std::invalid_argument("r_mot must lie in [0, 1]");
  if (payload < 0.0) throw std::invalid_argument("payload must be non-negative");
}

Vec2 forward_kinematics(const ArmParams& p, const Joint2& q) {
  return {p.l1 * std::cos(q[0]) + p.l2 * std::cos(q[0] + q[1]),
          p.l1 * std::sin(q[0]) + p.l2 * std::sin(q[0] + q[1])};
}

Joint2 inverse_kinematics(const ArmParams& p, Vec2 target) {
  const double d2 = target.x * target.x + target.y * target.y;
  const double d = std::sqrt(d2);
  if (d > p.l1 + p.l2 || d < std::abs(p.l1 - p.l2)) throw WorkspaceError(target);
  const double c2 = std::clamp((d2 - p.l1 * p.l1 - p.l2 * p.l2) / (2.0 * p.l1 * p.l2), -1.0, 1.0);
  const double q2 = std::acos(c2);
  const double q1 =
      std::atan2(target.y, target.x) - std::atan2(p.l2 * std::sin(q2), p.l1 + p.l2 * std::cos(q2));
  return {q1, q2};
}

DynamicsTerms dynamics_terms(const ArmParams& p, const Joint2& q, const Joint2& qd) {
  const Lumped b = lump(p);
  const double c2 = std::cos(q[1]);
  const double h = p.l1 * b.s2 * std::sin(q[1]);
  DynamicsTerms t;
  t.mass[0][0] = b.i1 + b.i2 + b.m2 * p.l1 * p.l1 + 2.0 * p.l1 * b.s2 * c2;
  t.mass[0][1] = t.mass[1][0] = b.i2 + p.l1 * b.s2 * c2;
  t.mass[1][1] = b.i2;
  t.coriolis = {-h * (2.0 * qd[0] * qd[1] + qd[1] * qd[1]), h * qd[0] * qd[0]};
  const double c1 = std::cos(q[0]);
  const double c12 = std::cos(q[0] + q[1]);
  t.gravity = {p.gravity * ((b.s1 + b.m2 * p.l1) * c1 + b.s2 * c12), p.gravity * b.s2 * c12};
  return t;
}

Joint2 dynamics_accel(const ArmParams& p, const Joint2& q, const Joint2& qd, const Joint2& tau) {
  const DynamicsTerms t = dynamics_terms(p, q, qd);
  const double r0 = tau[0] - t.coriolis[0] - t.gravity[0];
  const double r1 = tau[1] - t.coriolis[1] - t.gravity[1];
  const auto& m = t.mass;
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return {(m[1][1] * r0 - m[0][1] * r1) / det, (m[0][0] * r1 - m[1][0] * r0) / det};
}

double kinetic_energy(const ArmParams& p, const Joint2& q, const Joint2& qd) {
  const auto m = dynamics_terms(p, q, qd).mass;
  return 0.5 * (m[0][0] * qd[0] * qd[0] + 2.0 * m[0][1] * qd[0] * qd[1] + m[1][1] * qd[1] * qd[1]);
}

double potential_energy(const ArmParams& p, const Joint2& q) {
  const Lumped b = lump(p);
  return p.gravity * ((b.s1 + b.m2 * p.l1) * std::sin(q[0]) + b.s2 * std::sin(q[0] + q[1]));
}

ArmState rk4_step(const ArmParams& p, const ArmState& s, const Joint2& tau, double dt) {
  double unused = 0.0;
  return rk4_with_energy(p, s, tau, dt, unused);
}

bool reachable(const ArmParams& p, Vec2 target, double margin) {
  const double d = std::hypot(target.x, target.y);
  return d >= std::abs(p.l1 - p.l2) + margin && d <= p.l1 + p.l2 - margin;
}

std::array<bool, 2> reachability_check(const ArmParams& p, const Task& task, double margin) {
  return {reachable(p, task.pick, margin), reachable(p, task.place, margin)};
}

SimResult simulate_cycle(const ArmParams& p, const Task& task, const SimOptions& options) {
  SimResult result;
  const double margin = options.margin_ratio * (p.l1 + p.l2);
  const auto reach = reachability_check(p, task, margin);
  if (!reach[0] || !reach[1]) {
    result.reachable = false;
    return result;
  }

  const Joint2 q_pick = inverse_kinematics(p, task.pick);
  const Joint2 q_place = inverse_kinematics(p, task.place);
  const double dt = options.dt;
  const auto max_steps = static_cast<long>(std::llround(task.t_max / dt));
  const auto hold_steps = static_cast<long>(std::ceil(task.t_hold / dt - 1e-9));
  const Joint2 kp{p.kp1, p.kp2};
  const Joint2 kd{p.kd1, p.kd2};
  const Joint2 limit{p.tau1_max, p.tau2_max};

  ArmState state{q_place, {0.0, 0.0}};
  Joint2 ref = q_pick;
  Vec2 goal = task.pick;
  bool returning = false;
  long settled_since = -1;
  std::array<long, 2> saturated{0, 0};
  long step = 0;
  bool done = false;
  const std::size_t stride = std::max<std::size_t>(options.record_stride, 1);

  while (step < max_steps) {
    Joint2 tau;
    for (int i = 0; i < 2; ++i) {
      const double cmd = kp[i] * (ref[i] - state.q[i]) - kd[i] * state.qd[i];
      tau[i] = std::clamp(cmd, -limit[i], limit[i]);
      if (tau[i] != cmd) ++saturated[i];
    }
    if (options.record_trajectory && static_cast<std::size_t>(step) % stride == 0) {
      result.trajectory.push_back({static_cast<double>(step) * dt, state.q, state.qd, tau});
    }
    state = rk4_with_energy(p, state, tau, dt, result.L);
    ++step;

    const Vec2 ee = forward_kinematics(p, state.q);
    const bool settled = std::hypot(ee.x - goal.x, ee.y - goal.y) <= task.eps_pos &&
                         std::max(std::abs(state.qd[0]), std::abs(state.qd[1])) <= task.omega_tol;
    if (!settled) {
      settled_since = -1;
      continue;
    }
    if (settled_since < 0) settled_since = step;
    if (step - settled_since < hold_steps) continue;
    if (returning) {
      done = true;
      break;
    }
    returning = true;
    ref = q_place;
    goal = task.place;
    settled_since = -1;
  }

  if (done) {
    result.t_cyc = static_cast<double>(step) * dt;
  } else {
    result.t_cyc = task.t_max;
    result.timed_out = true;
  }
  if (step > 0) {
    for (int i = 0; i < 2; ++i) {
      result.saturation_fraction[i] = static_cast<double>(saturated[i]) / static_cast<double>(step);
    }
  }
  return result;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& trajectory) {
  os << "t,q1,q2,qd1,qd2,tau1,tau2\n";
  char buf[256];
  for (const auto& s : trajectory) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.q[0],
                  s.q[1], s.qd[0], s.qd[1], s.tau[0], s.tau[1]);
    os << buf;
  }
}

}  // namespace solspace::arm
