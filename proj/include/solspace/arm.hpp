#pragma once

// Planar two-link arm in a vertical plane with joint PD control, torque
// saturation and a movable elbow-motor mass. Stands in for the sorting
// robot: produces cycle time and consumed energy for a pick-and-place task.
//
// Design-variable correspondence with the multi-link humanoid arm:
//   joint-1 torque limit / motor mass / PD gains -> tau1_max, m_mot, kp1, kd1
//   distal link length                            -> l2
//   motor-location link ratio                     -> r_mot

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "solspace/errors.hpp"

namespace solspace::arm {

using Joint2 = std::array<double, 2>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Model constants that are not design variables.
struct Constants {
  double rho = 2.0;        // link mass per unit length, kg/m
  double payload = 0.5;    // end-effector mass, kg
  double gravity = 9.81;   // m/s^2 along -y
  double dt = 1e-3;        // integrator step, s
  double margin_ratio = 0.05;  // reachability margin as a fraction of l1 + l2
};

struct ArmParams {
  double l1 = 0.5, l2 = 0.5;
  double m_mot = 1.0;
  double r_mot = 0.5;
  double tau1_max = 20.0, tau2_max = 10.0;
  double kp1 = 100.0, kd1 = 10.0, kp2 = 50.0, kd2 = 5.0;
  double rho = 2.0;
  double payload = 0.5;
  double gravity = 9.81;

  static ArmParams with_constants(const Constants& c);
  /// Throws std::invalid_argument when a length, mass, limit or gain is not
  /// strictly positive or r_mot is outside [0, 1].
  void check() const;
};

struct Task {
  Vec2 pick{0.4, 0.2};
  Vec2 place{0.2, 0.4};
  double eps_pos = 0.01;    // m
  double omega_tol = 0.05;  // rad/s
  double t_hold = 0.1;      // s
  double t_max = 5.0;       // s
};

struct TrajectorySample {
  double t;
  Joint2 q, qd, tau;
};

struct SimResult {
  double t_cyc = 0.0;      // t_max when timed_out
  bool timed_out = false;
  double L = 0.0;          // J
  bool reachable = true;   // false: t_cyc and L are undefined
  std::array<double, 2> saturation_fraction{0.0, 0.0};
  std::vector<TrajectorySample> trajectory;
};

class WorkspaceError : public DomainFailure {
 public:
  explicit WorkspaceError(Vec2 target);
  Vec2 target() const { return target_; }

 private:
  Vec2 target_;
};

Vec2 forward_kinematics(const ArmParams& p, const Joint2& q);

/// Elbow branch with q2 in [0, pi]. Throws WorkspaceError when the target
/// distance lies outside [|l1 - l2|, l1 + l2].
Joint2 inverse_kinematics(const ArmParams& p, Vec2 target);

/// Rigid-body terms of M(q) qdd + c(q, qd) + g(q) = tau.
struct DynamicsTerms {
  std::array<std::array<double, 2>, 2> mass;
  Joint2 coriolis;
  Joint2 gravity;
};
DynamicsTerms dynamics_terms(const ArmParams& p, const Joint2& q, const Joint2& qd);

/// Forward dynamics; tau is applied as given (callers clamp).
Joint2 dynamics_accel(const ArmParams& p, const Joint2& q, const Joint2& qd, const Joint2& tau);

double kinetic_energy(const ArmParams& p, const Joint2& q, const Joint2& qd);
double potential_energy(const ArmParams& p, const Joint2& q);
inline double total_energy(const ArmParams& p, const Joint2& q, const Joint2& qd) {
  return kinetic_energy(p, q, qd) + potential_energy(p, q);
}

struct ArmState {
  Joint2 q{0.0, 0.0};
  Joint2 qd{0.0, 0.0};
};

/// One classical RK4 step with tau held constant over the step.
ArmState rk4_step(const ArmParams& p, const ArmState& s, const Joint2& tau, double dt);

/// Reachability of {pick, place} with the margin band excluded.
std::array<bool, 2> reachability_check(const ArmParams& p, const Task& task, double margin);
bool reachable(const ArmParams& p, Vec2 target, double margin);

struct SimOptions {
  double dt = 1e-3;
  double margin_ratio = 0.05;
  bool record_trajectory = false;
  std::size_t record_stride = 1;
};

/// Start at rest at IK(place), drive to IK(pick), settle, drive back to
/// IK(place), settle. Control is a zero-order hold PD law evaluated once per
/// step: tau = clamp(Kp (q_ref - q) - Kd qd, +-tau_max).
SimResult simulate_cycle(const ArmParams& p, const Task& task, const SimOptions& options = {});

/// CSV with header t,q1,q2,qd1,qd2,tau1,tau2.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& trajectory);

}  // namespace solspace::arm
