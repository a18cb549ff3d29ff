#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace tq {

// Eigen aliases used across the library, templated on the real scalar.
template <typename Scalar> using Complex = std::complex<Scalar>;
template <typename Scalar> using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Vector2c = Eigen::Matrix<Complex<Scalar>, 2, 1>;
template <typename Scalar> using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;
template <typename Scalar> using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar> using ArrayXX = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ArrayXXc = Eigen::Array<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using cplx = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

template <typename Scalar> inline constexpr Scalar pi_v = std::numbers::pi_v<Scalar>;

/// Reduce an angle into (-pi, pi].
template <typename Scalar> Scalar wrap_angle(Scalar x) {
  const Scalar two_pi = 2 * pi_v<Scalar>;
  Scalar r = std::remainder(x, two_pi);  // [-pi, pi]
  if (r <= -pi_v<Scalar>) r += two_pi;
  return r;
}

/// Strictly increasing, evenly spaced grid from lo to hi with `nodes` points.
template <typename Scalar> VectorX<Scalar> uniform_grid(Scalar lo, Scalar hi, Index nodes) {
  VectorX<Scalar> g(nodes);
  if (nodes == 1) {
    g(0) = lo;
    return g;
  }
  const Scalar step = (hi - lo) / static_cast<Scalar>(nodes - 1);
  for (Index i = 0; i < nodes; ++i) g(i) = lo + step * static_cast<Scalar>(i);
  g(nodes - 1) = hi;
  return g;
}

/// Symmetric grid on [-hi, hi] with 2*half_nodes+1 points; the centre node is exactly 0.
template <typename Scalar> VectorX<Scalar> symmetric_grid(Scalar hi, Index half_nodes) {
  VectorX<Scalar> g(2 * half_nodes + 1);
  for (Index i = 0; i <= half_nodes; ++i) {
    const Scalar v = hi * static_cast<Scalar>(i) / static_cast<Scalar>(half_nodes);
    g(half_nodes + i) = v;
    g(half_nodes - i) = -v;
  }
  return g;
}

}  // namespace tq
