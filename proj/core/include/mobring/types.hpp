#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace mobring {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

}  // namespace mobring
