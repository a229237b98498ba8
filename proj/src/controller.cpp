#include "trajadv/controller.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/core.h>

#include "trajadv/errors.hpp"

namespace trajadv {

void Gains::validate() const {
  for (const auto* K : {&K_P, &K_D}) {
    const char* name = K == &K_P ? "K_P" : "K_D";
    if (!K->allFinite()) throw ConfigError(fmt::format("gain {} must be finite", name));
    if ((*K - K->transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw ConfigError(fmt::format("gain {} must be symmetric", name));
    }
    const Eigen::SelfAdjointEigenSolver<Matrix6d> eig(*K, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > 0.0)) {
      throw ConfigError(fmt::format("gain {} must be positive definite", name));
    }
  }
}

Gains Gains::diagonal(double kp, double kd) {
  return {kp * Matrix6d::Identity(), kd * Matrix6d::Identity()};
}

TaskSelection TaskSelection::only(std::initializer_list<int> active) {
  TaskSelection s;
  s.rows.fill(false);
  for (int r : active) s.rows.at(static_cast<std::size_t>(r)) = true;
  return s;
}

Matrix6d TaskSelection::selector() const {
  Matrix6d S = Matrix6d::Zero();
  for (int i = 0; i < 6; ++i) S(i, i) = rows[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
  return S;
}

int TaskSelection::count() const {
  return static_cast<int>(std::count(rows.begin(), rows.end(), true));
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& A, const PseudoInverseOptions& opts) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma[0] : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (opts.damping > 0.0) {
      inv[i] = sigma[i] / (sigma[i] * sigma[i] + opts.damping * opts.damping);
    } else if (sigma[i] > opts.relative_cutoff * sigma_max && sigma[i] > 0.0) {
      inv[i] = 1.0 / sigma[i];
    }
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

ControlMatrices control_matrices(const DynamicsQuantities& dyn, const TaskJacobian& jac,
                                 const RobotState& state, const TaskSelection& selection,
                                 const PseudoInverseOptions& pinv) {
  const Eigen::LLT<Eigen::MatrixXd> llt = factorize_mass(dyn.M);
  const Eigen::MatrixXd Minv_B = llt.solve(dyn.B);
  const Eigen::MatrixXd Minv_Jt = llt.solve(jac.J.transpose());
  const Eigen::VectorXd Minv_h = llt.solve(dyn.h);

  ControlMatrices cm;
  cm.Delta = selection.selector() * (jac.J * Minv_B);
  cm.Omega = jac.J * Minv_Jt;
  cm.Lambda = jac.J * Minv_h - jac.Jdot * state.nu;
  cm.Delta_pinv = pseudo_inverse(cm.Delta, pinv);
  const auto n = cm.Delta.cols();
  cm.NullProj = Eigen::MatrixXd::Identity(n, n) - cm.Delta_pinv * cm.Delta;
  return cm;
}

Vector6d desired_acceleration(const Vector6d& xddot_d, const TaskError& err, const Gains& gains) {
  return xddot_d - gains.K_D * err.vel_err - gains.K_P * err.int_vel_err;
}

Decomposition decompose_interaction(const ControlMatrices& cm, const Wrench& f_ext,
                                    const Vector6d& xdot_d, double threshold) {
  const Vector6d omega_f = cm.Omega * f_ext.as_vector();
  Decomposition dec;
  const double speed = xdot_d.norm();
  if (!(speed >= threshold)) {
    dec.perp_component = omega_f;
    return dec;
  }
  dec.parallel_dir = xdot_d / speed;
  dec.alpha = xdot_d.dot(omega_f) / speed;
  dec.perp_component = omega_f - dec.alpha * dec.parallel_dir;
  return dec;
}

Eigen::VectorXd control_torques(const ControlMatrices& cm, const Vector6d& xddot_star,
                                const Wrench& f_ext, const Eigen::VectorXd& tau0) {
  if (!xddot_star.allFinite() || !f_ext.is_finite() || !tau0.allFinite()) {
    throw InputError("control_torques: non-finite input");
  }
  const Vector6d task = xddot_star - cm.Omega * f_ext.as_vector() + cm.Lambda;
  Eigen::VectorXd tau = cm.Delta_pinv * task;
  if (tau0.size() != 0) {
    if (tau0.size() != tau.size()) {
      throw ConfigError(fmt::format("tau0 has {} entries, expected {}", tau0.size(), tau.size()));
    }
    tau += cm.NullProj * tau0;
  }
  return tau;
}

Vector6d exploiting_desired_acceleration(const Vector6d& xddot_d, const TaskError& err,
                                         const Gains& gains, const Decomposition& dec) {
  return desired_acceleration(xddot_d, err, gains) + std::max(dec.alpha, 0.0) * dec.parallel_dir;
}

Eigen::VectorXd posture_damping(const RobotState& state, double kd) { return -kd * state.nu; }

}  // namespace trajadv
