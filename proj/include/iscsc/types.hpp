#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace iscsc {

using cplx = std::complex<double>;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kJ{0.0, 1.0};

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// dBm -> watts: P = 10^((dBm - 30) / 10).
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace iscsc
