#include "trajadv/advancement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "trajadv/errors.hpp"

namespace trajadv {

void AdvancementConfig::validate() const {
  if (!(psidot_upper >= 1.0) || !std::isfinite(psidot_upper)) {
    throw ConfigError(fmt::format("psidot_upper must be >= 1, got {}", psidot_upper));
  }
  if (!(epsilon_reg >= 0.0) || !std::isfinite(epsilon_reg)) {
    throw ConfigError("epsilon_reg must be >= 0");
  }
  if (!(lowpass_cutoff_hz > 0.0) || !std::isfinite(lowpass_cutoff_hz)) {
    throw ConfigError("lowpass_cutoff_hz must be > 0");
  }
}

namespace {

double clamp_psidot(double ratio, double upper) {
  if (std::isnan(ratio)) return 1.0;
  return std::min(upper, std::max(1.0, ratio));
}

}  // namespace

double proposition_ratio(const Vector6d& xdot, const Vector6d& dpsi_x_d, double epsilon_reg) {
  const double den = dpsi_x_d.squaredNorm() + epsilon_reg;
  if (!(den > 0.0)) return 0.0;
  return xdot.dot(dpsi_x_d) / den;
}

double psidot_update(const Vector6d& xdot, const Vector6d& dpsi_x_d, const AdvancementConfig& cfg) {
  if (cfg.law == AdvancementLaw::Frozen) return 1.0;
  return clamp_psidot(proposition_ratio(xdot, dpsi_x_d, cfg.epsilon_reg), cfg.psidot_upper);
}

double appendix_ratio(const Vector6d& xdot, const Vector6d& dpsi_x_d, const Vector6d& omega_f,
                      double epsilon_reg) {
  const double path_w = dpsi_x_d.dot(omega_f);
  if (!(std::abs(path_w) >= epsilon_reg) || path_w == 0.0) return 0.0;
  return xdot.dot(omega_f) * path_w / (path_w * path_w + epsilon_reg * omega_f.squaredNorm());
}

double psidot_update_appendix(const Vector6d& xdot, const Vector6d& dpsi_x_d,
                              const Vector6d& omega_f, const AdvancementConfig& cfg) {
  if (cfg.law == AdvancementLaw::Frozen) return 1.0;
  return clamp_psidot(appendix_ratio(xdot, dpsi_x_d, omega_f, cfg.epsilon_reg), cfg.psidot_upper);
}

double sdot_condition_residual(const Vector6d& xdot, const Vector6d& dpsi_x_d, double psidot,
                               double epsilon_reg) {
  return xdot.dot(dpsi_x_d) * psidot - (dpsi_x_d.squaredNorm() + epsilon_reg) * psidot * psidot;
}

double lowpass_coefficient(double cutoff_hz, double dt) {
  return -std::expm1(-2.0 * std::numbers::pi * cutoff_hz * dt);
}

AdvancementState advance(const AdvancementState& state, double psidot_new, double dt,
                         const AdvancementConfig& cfg) {
  if (!(dt > 0.0)) throw DomainError(fmt::format("advance: dt must be > 0, got {}", dt));
  const double a = lowpass_coefficient(cfg.lowpass_cutoff_hz, dt);

  AdvancementState next;
  next.psi = state.psi + 0.5 * dt * (state.psidot + psidot_new);
  next.psidot = psidot_new;
  next.prev_psidot = state.psidot;
  // The filter consumes the derivative of the previous step; this step's raw
  // derivative waits in filter_state.
  next.psiddot = state.psiddot + a * (state.filter_state - state.psiddot);
  next.filter_state = (psidot_new - state.psidot) / dt;
  return next;
}

double lyapunov_value(const TaskError& err, const Gains& gains) {
  return 0.5 * err.vel_err.squaredNorm() + 0.5 * err.int_vel_err.dot(gains.K_P * err.int_vel_err);
}

}  // namespace trajadv
