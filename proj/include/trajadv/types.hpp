#pragma once

#include <Eigen/Core>

namespace trajadv {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix6Xd = Eigen::Matrix<double, 6, Eigen::Dynamic>;

// Row order of every task-space 6-vector: linear x, y, z then angular x, y, z,
// expressed in the inertial frame.
enum TaskRow : int { kX = 0, kY = 1, kZ = 2, kRx = 3, kRy = 4, kRz = 5 };

inline constexpr const char* kTaskRowSuffix[6] = {"x", "y", "z", "rx", "ry", "rz"};

}  // namespace trajadv
