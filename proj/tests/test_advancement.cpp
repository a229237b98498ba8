#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "trajadv/advancement.hpp"
#include "trajadv/errors.hpp"

using namespace trajadv;
using trajadv::testing::uniform_vector;

namespace {

Vector6d ex(double v) {
  Vector6d r = Vector6d::Zero();
  r[kX] = v;
  return r;
}

}  // namespace

TEST(UpdateRule, Examples) {
  AdvancementConfig cfg;
  const Vector6d dpsi = ex(0.1);
  EXPECT_NEAR(psidot_update(2 * dpsi, dpsi, cfg), 2.0, 1e-5);
  cfg.epsilon_reg = 0.0;
  EXPECT_DOUBLE_EQ(psidot_update(2 * dpsi, dpsi, cfg), 2.0);
  Vector6d perp = Vector6d::Zero();
  perp[kZ] = 0.4;
  EXPECT_EQ(psidot_update(perp, dpsi, cfg), 1.0);
  EXPECT_EQ(psidot_update(15 * dpsi, dpsi, cfg), 10.0);
  EXPECT_EQ(psidot_update(-3 * dpsi, dpsi, cfg), 1.0);
  cfg.law = AdvancementLaw::Frozen;
  EXPECT_EQ(psidot_update(2 * dpsi, dpsi, cfg), 1.0);
}

TEST(UpdateRule, RegularizedAtTurningPoint) {
  AdvancementConfig cfg;
  EXPECT_EQ(psidot_update(ex(0.2), Vector6d::Zero(), cfg), 1.0);
  EXPECT_TRUE(std::isfinite(proposition_ratio(ex(0.2), ex(1e-12), cfg.epsilon_reg)));
}

TEST(UpdateRule, BoundedForRandomInputs) {
  std::mt19937_64 rng(31);
  AdvancementConfig cfg;
  for (int i = 0; i < 10000; ++i) {
    const Vector6d xdot = uniform_vector(rng, 6, -1, 1);
    const Vector6d dpsi = uniform_vector(rng, 6, -0.1, 0.1) * std::pow(10.0, -static_cast<double>(i % 8));
    const double p = psidot_update(xdot, dpsi, cfg);
    ASSERT_GE(p, 1.0);
    ASSERT_LE(p, cfg.psidot_upper);
  }
}

TEST(UpdateRule, StabilityResidual) {
  std::mt19937_64 rng(32);
  AdvancementConfig cfg;
  for (int i = 0; i < 10000; ++i) {
    const Vector6d dpsi = uniform_vector(rng, 6, -0.2, 0.2);
    const Vector6d xdot = (i % 2 ? 3.0 : 0.5) * dpsi + 0.05 * uniform_vector(rng, 6, -1, 1);
    const double p = psidot_update(xdot, dpsi, cfg);
    if (p >= cfg.psidot_upper) continue;
    const double r = sdot_condition_residual(xdot, dpsi, p, cfg.epsilon_reg);
    const double scale = (dpsi.squaredNorm() + cfg.epsilon_reg) * p * p;
    ASSERT_LE(r, 1e-12 * scale) << i;
  }
}

TEST(AppendixRule, Examples) {
  AdvancementConfig cfg;
  cfg.law = AdvancementLaw::Appendix;
  const Vector6d dpsi = ex(0.1);
  EXPECT_EQ(psidot_update_appendix(2 * dpsi, dpsi, Vector6d::Zero(), cfg), 1.0);
  EXPECT_NEAR(psidot_update_appendix(2 * dpsi, dpsi, ex(0.25), cfg), 2.0, 1e-5);
  EXPECT_EQ(psidot_update_appendix(-2 * dpsi, dpsi, ex(0.25), cfg), 1.0);
  // Below the guard threshold.
  EXPECT_EQ(psidot_update_appendix(2 * dpsi, dpsi, ex(5e-8), cfg), 1.0);
  cfg.law = AdvancementLaw::Frozen;
  EXPECT_EQ(psidot_update_appendix(2 * dpsi, dpsi, ex(0.25), cfg), 1.0);
}

TEST(Advance, ConstantUnitRateTracksTime) {
  AdvancementConfig cfg;
  AdvancementState s;
  for (int k = 0; k < 2000; ++k) s = advance(s, 1.0, 1e-3, cfg);
  EXPECT_NEAR(s.psi, 2.0, 1e-9);
  EXPECT_EQ(s.psiddot, 0.0);
}

TEST(Advance, ConstantRateIntegratesExactly) {
  AdvancementConfig cfg;
  AdvancementState s;
  s.psi = 3.0;
  s.psidot = 2.5;
  s.prev_psidot = 2.5;
  for (int k = 0; k < 400; ++k) s = advance(s, 2.5, 5e-3, cfg);
  EXPECT_NEAR(s.psi - 3.0, 2.5 * 2.0, 1e-9);
}

TEST(Advance, StepResponseFollowsFilterTimeConstant) {
  AdvancementConfig cfg;
  const double dt = 1e-3;
  AdvancementState s;
  s = advance(s, 2.0, dt, cfg);
  EXPECT_EQ(s.psiddot, 0.0);  // derivative held back one step
  s = advance(s, 2.0, dt, cfg);
  const double first = s.psiddot;
  EXPECT_NEAR(first, (1.0 - std::exp(-2 * M_PI * cfg.lowpass_cutoff_hz * dt)) / dt, 1e-9);
  for (int k = 1; k <= 300; ++k) {
    s = advance(s, 2.0, dt, cfg);
    const double expect = first * std::exp(-2 * M_PI * cfg.lowpass_cutoff_hz * k * dt);
    ASSERT_NEAR(s.psiddot, expect, 1e-9 * first) << k;
  }
  EXPECT_LT(s.psiddot, 1e-3 * first);
}

TEST(Advance, RejectsBadStep) {
  EXPECT_THROW(advance({}, 1.0, 0.0, {}), DomainError);
  EXPECT_THROW(advance({}, 1.0, -1e-3, {}), DomainError);
}

TEST(AdvancementConfig, Validation) {
  AdvancementConfig c;
  c.psidot_upper = 0.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.epsilon_reg = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.lowpass_cutoff_hz = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Lyapunov, Examples) {
  const Gains g = Gains::diagonal(25, 10);
  EXPECT_EQ(lyapunov_value({}, g), 0.0);
  TaskError e;
  e.vel_err[kX] = 0.1;
  EXPECT_NEAR(lyapunov_value(e, g), 0.005, 1e-17);
  std::mt19937_64 rng(33);
  for (int i = 0; i < 1000; ++i) {
    TaskError r{uniform_vector(rng, 6, -1, 1), uniform_vector(rng, 6, -1, 1)};
    ASSERT_GE(lyapunov_value(r, g), 0.0);
  }
}
