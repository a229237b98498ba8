#pragma once

#include <array>

#include <Eigen/Core>

#include "trajadv/dynamics.hpp"
#include "trajadv/types.hpp"
#include "trajadv/wrench.hpp"

namespace trajadv {

struct Gains {
  Matrix6d K_P = Matrix6d::Identity();
  Matrix6d K_D = Matrix6d::Identity();

  // Symmetric to 1e-12 and positive definite, else ConfigError.
  void validate() const;
  static Gains diagonal(double kp, double kd);
};

// Active task rows. The controller always works in 6-D; inactive rows are
// removed from Delta, so they neither receive torque nor constrain it.
struct TaskSelection {
  std::array<bool, 6> rows = {true, true, true, true, true, true};

  static TaskSelection all() { return {}; }
  static TaskSelection only(std::initializer_list<int> active);
  Matrix6d selector() const;
  Vector6d mask(const Vector6d& v) const { return selector() * v; }
  bool active(int row) const { return rows[static_cast<std::size_t>(row)]; }
  int count() const;
};

struct PseudoInverseOptions {
  double relative_cutoff = 1e-8;  // singular values below cutoff * sigma_max are dropped
  double damping = 0.0;           // > 0 selects the damped least-squares inverse
};

// SVD-based pseudo-inverse.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& A, const PseudoInverseOptions& opts = {});

struct ControlMatrices {
  Matrix6Xd Delta;            // S J M^-1 B        (6 x n)
  Matrix6d Omega;             // J M^-1 J_c^T      (6 x 6), contact link = tracked link
  Vector6d Lambda;            // J M^-1 h - Jdot nu
  Eigen::MatrixXd Delta_pinv; // n x 6
  Eigen::MatrixXd NullProj;   // I - Delta^+ Delta
};

ControlMatrices control_matrices(const DynamicsQuantities& dyn, const TaskJacobian& jac,
                                 const RobotState& state,
                                 const TaskSelection& selection = TaskSelection::all(),
                                 const PseudoInverseOptions& pinv = {});

struct TaskError {
  Vector6d vel_err = Vector6d::Zero();      // xdot - xdot_d
  Vector6d int_vel_err = Vector6d::Zero();  // running integral of vel_err
};

// xddot* = xddot_d - K_D vel_err - K_P int_vel_err
Vector6d desired_acceleration(const Vector6d& xddot_d, const TaskError& err, const Gains& gains);

inline constexpr double kVelocitySingularity = 1e-6;  // m/s

struct Decomposition {
  double alpha = 0.0;
  Vector6d parallel_dir = Vector6d::Zero();
  Vector6d perp_component = Vector6d::Zero();
};

// Splits Omega f into alpha * xdot_d/|xdot_d| plus a perpendicular remainder.
// Below the velocity-singularity threshold alpha = 0 and the whole of
// Omega f is the remainder.
Decomposition decompose_interaction(const ControlMatrices& cm, const Wrench& f_ext,
                                    const Vector6d& xdot_d,
                                    double threshold = kVelocitySingularity);

// tau = Delta^+ (xddot* - Omega f + Lambda) + N tau0. An empty tau0 means zero.
Eigen::VectorXd control_torques(const ControlMatrices& cm, const Vector6d& xddot_star,
                                const Wrench& f_ext, const Eigen::VectorXd& tau0 = {});

// Classical xddot* plus the correction term max(alpha, 0) * parallel_dir.
Vector6d exploiting_desired_acceleration(const Vector6d& xddot_d, const TaskError& err,
                                         const Gains& gains, const Decomposition& dec);

// Joint damping posture torque -kd * nu, meant to be passed as tau0.
Eigen::VectorXd posture_damping(const RobotState& state, double kd);

}  // namespace trajadv
