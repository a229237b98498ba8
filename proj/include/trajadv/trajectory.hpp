#pragma once

#include <vector>

#include "trajadv/types.hpp"

namespace trajadv {

enum class TrajectoryKind { Sinusoid1D, ConstantPose, Composite };

enum class RampKind { None, MinJerk };

// Path x_d(psi) in task space; purely spatial, all timing lives in psi.
//
// Sinusoid1D:   x_d = base_pose + axis * amplitude * r(psi) * sin(2 pi frequency psi)
//               with r = 1, or the minimum-jerk blend 10u^3 - 15u^4 + 6u^5,
//               u = psi / ramp_duration clamped to [0, 1].
// ConstantPose: x_d = base_pose.
// Composite:    base_pose + sum of (component(psi) - component.base_pose).
struct ReferenceTrajectory {
  TrajectoryKind kind = TrajectoryKind::Sinusoid1D;
  Vector6d base_pose = Vector6d::Zero();
  Vector6d axis = Vector6d::Unit(kX);
  double amplitude = 0.05;  // m
  double frequency = 0.1;   // Hz (cycles per unit psi)
  RampKind ramp = RampKind::None;
  double ramp_duration = 0.0;  // <= 0 selects a quarter period
  std::vector<ReferenceTrajectory> components;

  double effective_ramp_duration() const;
  // Throws ConfigError.
  void validate() const;

  static ReferenceTrajectory sinusoid(const Vector6d& base, int row, double amplitude,
                                      double frequency, RampKind ramp = RampKind::None);
  static ReferenceTrajectory constant(const Vector6d& base);
};

struct TrajectorySample {
  Vector6d x_d = Vector6d::Zero();
  Vector6d dpsi_x_d = Vector6d::Zero();
  Vector6d d2psi_x_d = Vector6d::Zero();
};

// Analytic value and first two psi-partials. Throws DomainError for psi < 0.
TrajectorySample sample(const ReferenceTrajectory& traj, double psi);

struct ReferenceKinematics {
  Vector6d xdot_d = Vector6d::Zero();
  Vector6d xddot_d = Vector6d::Zero();
};

// xdot_d = dpsi_x_d psidot;  xddot_d = d2psi_x_d psidot^2 + dpsi_x_d psiddot.
ReferenceKinematics reference_kinematics(const TrajectorySample& s, double psidot, double psiddot);

// Quintic 10u^3 - 15u^4 + 6u^5 and its first two derivatives in u.
struct BlendValue {
  double s;
  double ds;
  double dds;
};
BlendValue min_jerk_blend(double u);

}  // namespace trajadv
