#pragma once

#include "trajadv/controller.hpp"
#include "trajadv/types.hpp"

namespace trajadv {

enum class AdvancementLaw { Proposition1, Appendix, Frozen };

struct AdvancementConfig {
  double psidot_upper = 10.0;
  double epsilon_reg = 1e-8;
  double lowpass_cutoff_hz = 10.0;
  AdvancementLaw law = AdvancementLaw::Proposition1;
  // Feed the filtered psiddot into the reference acceleration. Off by
  // default: with it on, the filtered derivative closes a loop with unit DC
  // gain around the correction term and psidot ratchets up to the ceiling.
  bool psiddot_feedforward = false;

  void validate() const;
};

struct AdvancementState {
  double psi = 0.0;
  double psidot = 1.0;        // in [1, psidot_upper]
  double psiddot = 0.0;       // low-pass output, one step behind the raw derivative
  double prev_psidot = 1.0;
  double filter_state = 0.0;  // raw derivative held back by one step before filtering
};

// Regularized ratio xdot^T dpsi / (|dpsi|^2 + eps), the unclamped argument of
// the update rule.
double proposition_ratio(const Vector6d& xdot, const Vector6d& dpsi_x_d, double epsilon_reg);

// psidot = min(upper, max(1, ratio)); 1 for the frozen law.
double psidot_update(const Vector6d& xdot, const Vector6d& dpsi_x_d, const AdvancementConfig& cfg);

// Variant driven by the interaction acceleration w = Omega f:
//   ratio = (xdot^T w)(dpsi^T w) / ((dpsi^T w)^2 + eps |w|^2)
// which is xdot^T w / dpsi^T w with a sign-preserving regularization. When
// |dpsi^T w| < eps the ratio is taken as 0, so psidot = 1.
double appendix_ratio(const Vector6d& xdot, const Vector6d& dpsi_x_d, const Vector6d& omega_f,
                      double epsilon_reg);
double psidot_update_appendix(const Vector6d& xdot, const Vector6d& dpsi_x_d,
                              const Vector6d& omega_f, const AdvancementConfig& cfg);

// xdot^T dpsi psidot - (|dpsi|^2 + eps) psidot^2. Non-positive whenever
// psidot is at least the (regularized) ratio, i.e. Vdot <= 0 is not violated
// by the advancement term.
double sdot_condition_residual(const Vector6d& xdot, const Vector6d& dpsi_x_d, double psidot,
                               double epsilon_reg = 0.0);

// First-order low-pass coefficient for a sampled step: 1 - exp(-2 pi fc dt).
double lowpass_coefficient(double cutoff_hz, double dt);

// Trapezoidal psi integration and the delayed, filtered psiddot. Throws
// DomainError for dt <= 0.
AdvancementState advance(const AdvancementState& state, double psidot_new, double dt,
                         const AdvancementConfig& cfg);

// V = 1/2 |vel_err|^2 + 1/2 int^T K_P int
double lyapunov_value(const TaskError& err, const Gains& gains);

}  // namespace trajadv
