#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace agen {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using Operator = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// An element (x, y) of X x X; on the graph of U_i we have y = U_i x.
struct GraphVector {
  StateVector first;
  StateVector second;
};

/// l2 norm of the pair, sqrt(|x|^2 + |y|^2).
inline double norm(const GraphVector& v) {
  return std::sqrt(v.first.squaredNorm() + v.second.squaredNorm());
}

}  // namespace agen
