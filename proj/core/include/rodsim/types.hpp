#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace rodsim {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

template <typename T>
using Vec3T = Eigen::Matrix<T, 3, 1>;
template <typename T>
using Mat3T = Eigen::Matrix<T, 3, 3>;

inline const Vec3 E1 = Vec3::UnitX();
inline const Vec3 E2 = Vec3::UnitY();
inline const Vec3 E3 = Vec3::UnitZ();

}  // namespace rodsim
