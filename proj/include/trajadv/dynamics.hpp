#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "trajadv/types.hpp"
#include "trajadv/wrench.hpp"

namespace trajadv {

enum class JointKind { Revolute, Prismatic };

// Planar serial chain articulating in the inertial x-z plane (z against
// gravity). A revolute joint rotates the distal chain about the plane normal;
// positive angles turn +x toward +z. A prismatic joint slides along a
// direction `axis_angle` radians from its parent link's direction.
struct JointSpec {
  JointKind kind = JointKind::Revolute;
  double axis_angle = 0.0;
};

struct LinkSpec {
  double length = 1.0;      // m, joint origin to distal end
  double mass = 1.0;        // kg
  double com_offset = 0.5;  // m, along the link from its joint origin
  double inertia = 0.0;     // kg·m², about the COM, normal to the plane
};

struct RobotModel {
  std::string name;
  std::vector<JointSpec> joints;
  std::vector<LinkSpec> links;  // links[i] is moved by joints[i]
  double gravity_g = 9.81;
  int base_dof = 0;  // 0: fixed base. 6 is reserved and rejected.
  std::size_t tracked_link = 0;
  Eigen::Vector3d base_position = Eigen::Vector3d::Zero();
  double base_angle = 0.0;  // direction of link 0 at q = 0

  std::size_t n_joints() const { return joints.size(); }
  std::size_t dof() const { return joints.size() + static_cast<std::size_t>(base_dof); }

  // Throws ConfigError if any invariant is violated.
  void validate() const;
};

struct RobotState {
  Eigen::VectorXd q;
  Eigen::VectorXd nu;

  static RobotState zero(const RobotModel& model);
};

struct DynamicsQuantities {
  Eigen::MatrixXd M;
  Eigen::MatrixXd C;
  Eigen::VectorXd G;
  Eigen::VectorXd h;  // C * nu + G
  Eigen::MatrixXd B;  // actuated torques -> generalized forces
};

struct TaskJacobian {
  Matrix6Xd J;
  Matrix6Xd Jdot;
};

struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();

  // [position; rotation vector], the logged task-space coordinates.
  Vector6d as_vector() const;
};

// Throws ConfigError on dimension mismatch, InputError on non-finite entries.
void check_state(const RobotModel& model, const RobotState& state);

Eigen::MatrixXd mass_matrix(const RobotModel& model, const Eigen::VectorXd& q);

// M, C (Christoffel symbols of M, so dM/dt - 2C is skew), G, h and B.
DynamicsQuantities compute_dynamics(const RobotModel& model, const RobotState& state);

TaskJacobian task_jacobian(const RobotModel& model, const RobotState& state);

Pose forward_kinematics(const RobotModel& model, const RobotState& state);

// Solves M nudot = B tau + J^T f - h with a Cholesky factorization. Throws
// DegenerateModelError if cond(M) exceeds kMaxMassCondition.
Eigen::VectorXd forward_dynamics(const RobotModel& model, const RobotState& state,
                                 const Eigen::VectorXd& tau, const Wrench& f_ext);

inline constexpr double kMaxMassCondition = 1e12;

// Cholesky factor of M after a conditioning check; throws DegenerateModelError.
Eigen::LLT<Eigen::MatrixXd> factorize_mass(const Eigen::MatrixXd& M);

double kinetic_energy(const RobotModel& model, const RobotState& state);
double potential_energy(const RobotModel& model, const RobotState& state);

namespace models {

// 1-DOF prismatic slider along +x, 2 kg, gravity orthogonal to the rail.
RobotModel slider();
// Planar 2-link revolute arm, 0.3 m + 0.3 m, zero configuration along +x.
RobotModel planar_arm2();
// Planar 3-link revolute leg (hip, knee, ankle) hanging along -z; the
// tracked link is the foot.
RobotModel leg3();

const std::vector<std::string>& builtin_names();
// Throws ConfigError for an unknown name.
RobotModel by_name(const std::string& name);

}  // namespace models

}  // namespace trajadv
