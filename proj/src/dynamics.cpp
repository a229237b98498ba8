#include "trajadv/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <type_traits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <fmt/core.h>

#include "trajadv/dual.hpp"
#include "trajadv/errors.hpp"

namespace trajadv {

namespace {

template <class T>
struct P2 {
  T x;
  T z;
};

// Positions of every joint origin, link COM and link tip relative to the
// base position, plus absolute link angles and prismatic slide directions.
template <class T>
struct Chain {
  std::vector<P2<T>> origin;
  std::vector<P2<T>> com;
  std::vector<P2<T>> tip;
  std::vector<T> angle;
  std::vector<P2<T>> slide;
};

template <class T>
Chain<T> chain_geometry(const RobotModel& model, const std::vector<T>& q) {
  using std::cos;
  using std::sin;
  const std::size_t n = model.n_joints();
  Chain<T> c;
  c.origin.resize(n);
  c.com.resize(n);
  c.tip.resize(n);
  c.angle.resize(n);
  c.slide.resize(n, P2<T>{T(0.0), T(0.0)});

  T ang(model.base_angle);
  P2<T> p{T(0.0), T(0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const JointSpec& joint = model.joints[i];
    const LinkSpec& link = model.links[i];
    if (joint.kind == JointKind::Revolute) {
      ang = ang + q[i];
      c.origin[i] = p;
    } else {
      const T dir = ang + T(joint.axis_angle);
      c.slide[i] = {cos(dir), sin(dir)};
      c.origin[i] = {p.x + c.slide[i].x * q[i], p.z + c.slide[i].z * q[i]};
    }
    const T ca = cos(ang);
    const T sa = sin(ang);
    c.angle[i] = ang;
    c.com[i] = {c.origin[i].x + T(link.com_offset) * ca, c.origin[i].z + T(link.com_offset) * sa};
    c.tip[i] = {c.origin[i].x + T(link.length) * ca, c.origin[i].z + T(link.length) * sa};
    p = c.tip[i];
  }
  return c;
}

// Planar Jacobian of a point rigidly attached to `link`: linear x and z rows
// plus the in-plane angle rate row (derivative of the absolute link angle).
template <class T>
struct PointJacobian {
  std::vector<T> x;
  std::vector<T> z;
  std::vector<double> angle;
};

template <class T>
PointJacobian<T> point_jacobian(const RobotModel& model, const Chain<T>& c, std::size_t link,
                                const P2<T>& point) {
  const std::size_t n = model.n_joints();
  PointJacobian<T> jac{std::vector<T>(n, T(0.0)), std::vector<T>(n, T(0.0)),
                       std::vector<double>(n, 0.0)};
  for (std::size_t j = 0; j <= link; ++j) {
    if (model.joints[j].kind == JointKind::Revolute) {
      jac.x[j] = T(0.0) - (point.z - c.origin[j].z);
      jac.z[j] = point.x - c.origin[j].x;
      jac.angle[j] = 1.0;
    } else {
      jac.x[j] = c.slide[j].x;
      jac.z[j] = c.slide[j].z;
    }
  }
  return jac;
}

// Row-major n x n mass matrix and gravity vector.
template <class T>
void mass_and_gravity(const RobotModel& model, const std::vector<T>& q, std::vector<T>& M,
                      std::vector<T>& G) {
  const std::size_t n = model.n_joints();
  const Chain<T> c = chain_geometry(model, q);
  M.assign(n * n, T(0.0));
  G.assign(n, T(0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const LinkSpec& link = model.links[i];
    const PointJacobian<T> jac = point_jacobian(model, c, i, c.com[i]);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        M[a * n + b] += T(link.mass) * (jac.x[a] * jac.x[b] + jac.z[a] * jac.z[b]) +
                        T(link.inertia * jac.angle[a] * jac.angle[b]);
      }
      G[a] += T(link.mass * model.gravity_g) * jac.z[a];
    }
  }
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<Dual> seeded(const Eigen::VectorXd& q, const Eigen::VectorXd& direction) {
  std::vector<Dual> out(static_cast<std::size_t>(q.size()));
  for (Eigen::Index i = 0; i < q.size(); ++i) out[i] = Dual(q[i], direction[i]);
  return out;
}

Eigen::Matrix3d planar_rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix3d r;
  r << c, 0.0, -s, 0.0, 1.0, 0.0, s, 0.0, c;
  return r;
}

template <class T>
void fill_task_rows(const PointJacobian<T>& pj, Matrix6Xd& J, bool derivative) {
  J.setZero();
  for (std::size_t j = 0; j < pj.x.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    if constexpr (std::is_same_v<T, Dual>) {
      J(kX, col) = derivative ? pj.x[j].d : pj.x[j].v;
      J(kZ, col) = derivative ? pj.z[j].d : pj.z[j].v;
    } else {
      J(kX, col) = pj.x[j];
      J(kZ, col) = pj.z[j];
    }
    // Angle grows from +x toward +z: rotation about -y.
    J(kRy, col) = derivative ? 0.0 : -pj.angle[j];
  }
}

}  // namespace

void RobotModel::validate() const {
  if (base_dof == 6) {
    throw ConfigError("floating base (base_dof = 6) is not supported; use base_dof = 0");
  }
  if (base_dof != 0) {
    throw ConfigError(fmt::format("base_dof must be 0 or 6, got {}", base_dof));
  }
  if (joints.empty()) throw ConfigError("robot model has no joints");
  if (joints.size() != links.size()) {
    throw ConfigError(fmt::format("robot model has {} joints but {} links", joints.size(),
                                  links.size()));
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    const LinkSpec& l = links[i];
    if (!(l.mass > 0.0) || !std::isfinite(l.mass)) {
      throw ConfigError(fmt::format("link {}: mass must be > 0", i));
    }
    if (!(l.inertia >= 0.0) || !std::isfinite(l.inertia)) {
      throw ConfigError(fmt::format("link {}: inertia must be >= 0", i));
    }
    if (!(l.length > 0.0) || !std::isfinite(l.length)) {
      throw ConfigError(fmt::format("link {}: length must be > 0", i));
    }
    if (!std::isfinite(l.com_offset)) throw ConfigError(fmt::format("link {}: bad com_offset", i));
    if (!std::isfinite(joints[i].axis_angle)) {
      throw ConfigError(fmt::format("joint {}: bad axis_angle", i));
    }
  }
  if (!(gravity_g >= 0.0) || !std::isfinite(gravity_g)) {
    throw ConfigError("gravity_g must be finite and >= 0");
  }
  if (tracked_link >= joints.size()) {
    throw ConfigError(fmt::format("tracked_link {} out of range (model has {} links)",
                                  tracked_link, joints.size()));
  }
  if (!base_position.allFinite() || !std::isfinite(base_angle)) {
    throw ConfigError("base pose must be finite");
  }
}

RobotState RobotState::zero(const RobotModel& model) {
  const auto n = static_cast<Eigen::Index>(model.dof());
  return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
}

void check_state(const RobotModel& model, const RobotState& state) {
  model.validate();
  const auto n = static_cast<Eigen::Index>(model.dof());
  if (state.q.size() != n || state.nu.size() != n) {
    throw ConfigError(fmt::format("state dimension mismatch: model has {} DOF, q has {}, nu has {}",
                                  n, state.q.size(), state.nu.size()));
  }
  if (!state.q.allFinite() || !state.nu.allFinite()) {
    throw InputError("robot state contains non-finite entries");
  }
}

Eigen::MatrixXd mass_matrix(const RobotModel& model, const Eigen::VectorXd& q) {
  const auto n = static_cast<Eigen::Index>(model.n_joints());
  std::vector<double> m, g;
  mass_and_gravity(model, to_std(q), m, g);
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      m.data(), n, n);
}

DynamicsQuantities compute_dynamics(const RobotModel& model, const RobotState& state) {
  check_state(model, state);
  const std::size_t n = model.n_joints();
  const auto ni = static_cast<Eigen::Index>(n);

  DynamicsQuantities out;
  std::vector<double> m, g;
  mass_and_gravity(model, to_std(state.q), m, g);
  out.M.resize(ni, ni);
  out.G.resize(ni);
  for (std::size_t a = 0; a < n; ++a) {
    out.G[static_cast<Eigen::Index>(a)] = g[a];
    for (std::size_t b = 0; b < n; ++b) {
      out.M(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = m[a * n + b];
    }
  }

  // dM[k](i, j) = dM_ij / dq_k
  std::vector<Eigen::MatrixXd> dM(n, Eigen::MatrixXd::Zero(ni, ni));
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Dual> md, gd;
    mass_and_gravity(model, seeded(state.q, Eigen::VectorXd::Unit(ni, static_cast<Eigen::Index>(k))),
                     md, gd);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        dM[k](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = md[a * n + b].d;
      }
    }
  }

  out.C = Eigen::MatrixXd::Zero(ni, ni);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double cij = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const auto I = static_cast<Eigen::Index>(i);
        const auto J = static_cast<Eigen::Index>(j);
        const auto K = static_cast<Eigen::Index>(k);
        const double christoffel = 0.5 * (dM[k](I, J) + dM[j](I, K) - dM[i](J, K));
        cij += christoffel * state.nu[K];
      }
      out.C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cij;
    }
  }
  out.h = out.C * state.nu + out.G;
  out.B = Eigen::MatrixXd::Identity(ni, ni);
  return out;
}

TaskJacobian task_jacobian(const RobotModel& model, const RobotState& state) {
  check_state(model, state);
  const auto ni = static_cast<Eigen::Index>(model.n_joints());
  TaskJacobian out{Matrix6Xd::Zero(6, ni), Matrix6Xd::Zero(6, ni)};

  const std::vector<Dual> q = seeded(state.q, state.nu);
  const Chain<Dual> c = chain_geometry(model, q);
  const PointJacobian<Dual> pj = point_jacobian(model, c, model.tracked_link, c.tip[model.tracked_link]);
  fill_task_rows(pj, out.J, false);
  fill_task_rows(pj, out.Jdot, true);
  return out;
}

Pose forward_kinematics(const RobotModel& model, const RobotState& state) {
  check_state(model, state);
  const Chain<double> c = chain_geometry(model, to_std(state.q));
  const std::size_t link = model.tracked_link;
  Pose pose;
  pose.position = model.base_position + Eigen::Vector3d(c.tip[link].x, 0.0, c.tip[link].z);
  pose.rotation = planar_rotation(c.angle[link]);
  return pose;
}

Vector6d Pose::as_vector() const {
  const Eigen::AngleAxisd aa(rotation);
  Vector6d v;
  v << position, aa.angle() * aa.axis();
  return v;
}

Eigen::VectorXd forward_dynamics(const RobotModel& model, const RobotState& state,
                                 const Eigen::VectorXd& tau, const Wrench& f_ext) {
  const DynamicsQuantities dyn = compute_dynamics(model, state);
  if (tau.size() != static_cast<Eigen::Index>(model.n_joints())) {
    throw ConfigError(fmt::format("torque dimension {} does not match {} joints", tau.size(),
                                  model.n_joints()));
  }
  if (!tau.allFinite() || !f_ext.is_finite()) {
    throw InputError("torque or external wrench contains non-finite entries");
  }
  const TaskJacobian jac = task_jacobian(model, state);
  const Eigen::VectorXd rhs = dyn.B * tau + jac.J.transpose() * f_ext.as_vector() - dyn.h;
  return factorize_mass(dyn.M).solve(rhs);
}

Eigen::LLT<Eigen::MatrixXd> factorize_mass(const Eigen::MatrixXd& M) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || !(lmax / lmin <= kMaxMassCondition)) {
    throw DegenerateModelError(
        fmt::format("mass matrix is numerically singular (eigenvalues {:.3g} .. {:.3g})", lmin, lmax));
  }
  return M.llt();
}

double kinetic_energy(const RobotModel& model, const RobotState& state) {
  check_state(model, state);
  return 0.5 * state.nu.dot(mass_matrix(model, state.q) * state.nu);
}

double potential_energy(const RobotModel& model, const RobotState& state) {
  check_state(model, state);
  const Chain<double> c = chain_geometry(model, to_std(state.q));
  double u = 0.0;
  for (std::size_t i = 0; i < model.n_joints(); ++i) {
    u += model.links[i].mass * model.gravity_g * (model.base_position.z() + c.com[i].z);
  }
  return u;
}

namespace models {

RobotModel slider() {
  RobotModel m;
  m.name = "slider";
  m.joints = {{JointKind::Prismatic, 0.0}};
  m.links = {{0.1, 2.0, 0.05, 0.0}};
  m.tracked_link = 0;
  return m;
}

RobotModel planar_arm2() {
  RobotModel m;
  m.name = "planar_arm2";
  m.joints = {{JointKind::Revolute, 0.0}, {JointKind::Revolute, 0.0}};
  m.links = {{0.3, 1.0, 0.15, 0.0075}, {0.3, 1.0, 0.15, 0.0075}};
  m.tracked_link = 1;
  return m;
}

RobotModel leg3() {
  RobotModel m;
  m.name = "leg3";
  m.joints = {{JointKind::Revolute, 0.0}, {JointKind::Revolute, 0.0}, {JointKind::Revolute, 0.0}};
  // thigh, shank, foot
  m.links = {{0.40, 3.0, 0.18, 0.045}, {0.38, 1.6, 0.17, 0.022}, {0.12, 0.6, 0.05, 0.001}};
  m.base_angle = -std::numbers::pi / 2.0;
  m.tracked_link = 2;
  return m;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"slider", "planar_arm2", "leg3"};
  return names;
}

RobotModel by_name(const std::string& name) {
  if (name == "slider") return slider();
  if (name == "planar_arm2") return planar_arm2();
  if (name == "leg3") return leg3();
  throw ConfigError(fmt::format("unknown built-in model '{}'", name));
}

}  // namespace models

}  // namespace trajadv
