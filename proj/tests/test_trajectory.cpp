#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "trajadv/errors.hpp"
#include "trajadv/trajectory.hpp"

using namespace trajadv;

namespace {

Vector6d some_base() {
  Vector6d b;
  b << 0.1, -0.2, 0.3, 0.0, 0.4, 0.0;
  return b;
}

void expect_fd_partials(const ReferenceTrajectory& traj, double psi) {
  const double h = 1e-5;
  const auto s = sample(traj, psi);
  const auto p = sample(traj, psi + h), m = sample(traj, psi - h);
  const Vector6d d1 = (p.x_d - m.x_d) / (2 * h);
  const Vector6d d2 = (p.dpsi_x_d - m.dpsi_x_d) / (2 * h);
  EXPECT_LT((s.dpsi_x_d - d1).norm(), 1e-6 * std::max(1.0, d1.norm())) << psi;
  EXPECT_LT((s.d2psi_x_d - d2).norm(), 1e-6 * std::max(1.0, d2.norm())) << psi;
}

}  // namespace

TEST(Trajectory, SinusoidStartsAtBase) {
  const auto t = ReferenceTrajectory::sinusoid(some_base(), kX, 0.05, 0.1);
  EXPECT_LT((sample(t, 0.0).x_d - some_base()).norm(), 1e-16);
}

TEST(Trajectory, SinusoidInitialSlope) {
  const auto t = ReferenceTrajectory::sinusoid(Vector6d::Zero(), kX, 0.05, 0.1);
  const auto s = sample(t, 0.0);
  EXPECT_NEAR(s.dpsi_x_d[kX], 2 * std::numbers::pi * 0.1 * 0.05, 1e-15);
  EXPECT_NEAR(s.dpsi_x_d[kX], 0.0314159, 1e-7);
  const double h = 1e-6;
  EXPECT_NEAR((sample(t, h).x_d[kX] - 0.0) / h, s.dpsi_x_d[kX], 1e-7);
}

TEST(Trajectory, ConstantPoseHasZeroPartials) {
  const auto t = ReferenceTrajectory::constant(some_base());
  for (double psi : {0.0, 1.0, 17.3}) {
    const auto s = sample(t, psi);
    EXPECT_EQ(s.x_d, some_base());
    EXPECT_TRUE(s.dpsi_x_d.isZero());
    EXPECT_TRUE(s.d2psi_x_d.isZero());
  }
}

TEST(Trajectory, PartialsMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> psi_d(0.0, 25.0);
  auto plain = ReferenceTrajectory::sinusoid(some_base(), kZ, 0.05, 0.1);
  auto ramped = ReferenceTrajectory::sinusoid(some_base(), kX, 0.05, 0.1, RampKind::MinJerk);
  ReferenceTrajectory comp;
  comp.kind = TrajectoryKind::Composite;
  comp.base_pose = some_base();
  comp.components = {ramped, ReferenceTrajectory::sinusoid(Vector6d::Zero(), kZ, 0.02, 0.3)};
  for (int i = 0; i < 100; ++i) {
    const double psi = psi_d(rng);
    expect_fd_partials(plain, psi);
    expect_fd_partials(ramped, psi);
    expect_fd_partials(comp, psi);
  }
  for (double psi : {0.3, 1.0, 2.0, 2.49}) expect_fd_partials(ramped, psi);
}

TEST(Trajectory, MinJerkRampIsSmoothAtEnds) {
  const auto b0 = min_jerk_blend(0.0), b1 = min_jerk_blend(1.0);
  EXPECT_EQ(b0.s, 0.0);
  EXPECT_EQ(b0.ds, 0.0);
  EXPECT_EQ(b0.dds, 0.0);
  EXPECT_DOUBLE_EQ(b1.s, 1.0);
  EXPECT_NEAR(b1.ds, 0.0, 1e-14);
  EXPECT_NEAR(b1.dds, 0.0, 1e-13);
  EXPECT_DOUBLE_EQ(min_jerk_blend(0.5).s, 0.5);

  auto t = ReferenceTrajectory::sinusoid(Vector6d::Zero(), kX, 0.05, 0.1, RampKind::MinJerk);
  EXPECT_DOUBLE_EQ(t.effective_ramp_duration(), 2.5);
  const auto s0 = sample(t, 0.0);
  EXPECT_TRUE(s0.dpsi_x_d.isZero());
  // Beyond the ramp the plain sinusoid is recovered.
  const auto plain = ReferenceTrajectory::sinusoid(Vector6d::Zero(), kX, 0.05, 0.1);
  EXPECT_LT((sample(t, 7.0).x_d - sample(plain, 7.0).x_d).norm(), 1e-16);
}

TEST(Trajectory, ReferenceKinematics) {
  TrajectorySample s;
  s.dpsi_x_d[kX] = 0.01;
  s.d2psi_x_d[kX] = -0.002;
  const auto r = reference_kinematics(s, 2.0, 0.5);
  EXPECT_NEAR(r.xdot_d[kX], 0.02, 1e-16);
  EXPECT_NEAR(r.xddot_d[kX], -0.003, 1e-16);

  const auto one = reference_kinematics(s, 1.0, 0.0);
  EXPECT_EQ(one.xdot_d, s.dpsi_x_d);
  EXPECT_EQ(one.xddot_d, s.d2psi_x_d);
  const auto zero = reference_kinematics(s, 0.0, 0.0);
  EXPECT_TRUE(zero.xdot_d.isZero());
  EXPECT_TRUE(zero.xddot_d.isZero());
}

TEST(Trajectory, RejectsNegativePsiAndBadConfig) {
  const auto t = ReferenceTrajectory::sinusoid(Vector6d::Zero(), kX, 0.05, 0.1);
  EXPECT_THROW(sample(t, -0.1), DomainError);
  auto bad = t;
  bad.frequency = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = t;
  bad.axis = Vector6d::Ones();
  EXPECT_THROW(bad.validate(), ConfigError);
  ReferenceTrajectory empty;
  empty.kind = TrajectoryKind::Composite;
  EXPECT_THROW(empty.validate(), ConfigError);
}
