#include "trajadv/trajectory.hpp"

#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "trajadv/errors.hpp"

namespace trajadv {

double ReferenceTrajectory::effective_ramp_duration() const {
  return ramp_duration > 0.0 ? ramp_duration : 0.25 / frequency;
}

void ReferenceTrajectory::validate() const {
  if (!base_pose.allFinite()) throw ConfigError("trajectory base_pose must be finite");
  switch (kind) {
    case TrajectoryKind::ConstantPose:
      return;
    case TrajectoryKind::Composite:
      if (components.empty()) throw ConfigError("composite trajectory needs at least one component");
      for (const auto& c : components) c.validate();
      return;
    case TrajectoryKind::Sinusoid1D:
      break;
  }
  if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > 1e-9) {
    throw ConfigError(fmt::format("trajectory axis must have unit norm (got {})", axis.norm()));
  }
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw ConfigError("trajectory amplitude must be >= 0");
  }
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw ConfigError("trajectory frequency must be > 0");
  }
  if (!std::isfinite(ramp_duration)) throw ConfigError("trajectory ramp duration must be finite");
}

ReferenceTrajectory ReferenceTrajectory::sinusoid(const Vector6d& base, int row, double amplitude,
                                                  double frequency, RampKind ramp) {
  ReferenceTrajectory t;
  t.kind = TrajectoryKind::Sinusoid1D;
  t.base_pose = base;
  t.axis = Vector6d::Unit(row);
  t.amplitude = amplitude;
  t.frequency = frequency;
  t.ramp = ramp;
  return t;
}

ReferenceTrajectory ReferenceTrajectory::constant(const Vector6d& base) {
  ReferenceTrajectory t;
  t.kind = TrajectoryKind::ConstantPose;
  t.base_pose = base;
  return t;
}

BlendValue min_jerk_blend(double u) {
  if (u <= 0.0) return {0.0, 0.0, 0.0};
  if (u >= 1.0) return {1.0, 0.0, 0.0};
  const double u2 = u * u;
  const double u3 = u2 * u;
  return {u3 * (10.0 - 15.0 * u + 6.0 * u2), 30.0 * u2 * (1.0 - 2.0 * u + u2),
          60.0 * u * (1.0 - 3.0 * u + 2.0 * u2)};
}

namespace {

TrajectorySample sample_unchecked(const ReferenceTrajectory& traj, double psi) {
  TrajectorySample s;
  s.x_d = traj.base_pose;
  switch (traj.kind) {
    case TrajectoryKind::ConstantPose:
      return s;
    case TrajectoryKind::Composite:
      for (const auto& c : traj.components) {
        const TrajectorySample cs = sample_unchecked(c, psi);
        s.x_d += cs.x_d - c.base_pose;
        s.dpsi_x_d += cs.dpsi_x_d;
        s.d2psi_x_d += cs.d2psi_x_d;
      }
      return s;
    case TrajectoryKind::Sinusoid1D:
      break;
  }

  const double w = 2.0 * std::numbers::pi * traj.frequency;
  const double sn = std::sin(w * psi);
  const double cs = std::cos(w * psi);
  double r = 1.0, dr = 0.0, ddr = 0.0;
  if (traj.ramp == RampKind::MinJerk) {
    const double T = traj.effective_ramp_duration();
    const BlendValue b = min_jerk_blend(psi / T);
    r = b.s;
    dr = b.ds / T;
    ddr = b.dds / (T * T);
  }
  const double a = traj.amplitude;
  const double f0 = a * r * sn;
  const double f1 = a * (dr * sn + r * w * cs);
  const double f2 = a * (ddr * sn + 2.0 * dr * w * cs - r * w * w * sn);
  s.x_d += traj.axis * f0;
  s.dpsi_x_d = traj.axis * f1;
  s.d2psi_x_d = traj.axis * f2;
  return s;
}

}  // namespace

TrajectorySample sample(const ReferenceTrajectory& traj, double psi) {
  if (!(psi >= 0.0)) throw DomainError(fmt::format("free parameter psi must be >= 0, got {}", psi));
  return sample_unchecked(traj, psi);
}

ReferenceKinematics reference_kinematics(const TrajectorySample& s, double psidot, double psiddot) {
  return {s.dpsi_x_d * psidot, s.d2psi_x_d * (psidot * psidot) + s.dpsi_x_d * psiddot};
}

}  // namespace trajadv
