#pragma once

// Exact solution of the theta quench at vanishing gauge coupling. Every
// momentum mode is an independent two-level problem
//
//   h_theta(k) = gamma0 (k gamma1 + m exp(i theta gamma5)),
//
// prepared in its negative-energy spinor for the initial angle and evolved
// with the Hamiltonian of the final angle.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "thetaquench/errors.hpp"
#include "thetaquench/topology.hpp"
#include "thetaquench/types.hpp"

namespace tq {

enum class GammaConvention {
  /// gamma0 = sigma_z, gamma1 = i sigma_y, gamma5 = sigma_x.
  Standard,
  /// gamma0 = sigma_x, gamma1 = i sigma_y, gamma5 = -sigma_z. Only used to
  /// check that physical outputs do not depend on the representation.
  Alternate,
};

enum class QuenchSide { Initial, Final };

template <typename Scalar = double> struct FreeParams {
  Scalar m = 1;
  Scalar theta = 0;
  Scalar theta_prime = 0;
  GammaConvention convention = GammaConvention::Standard;

  /// theta - theta' reduced into (-pi, pi].
  Scalar dtheta() const { return wrap_angle(theta - theta_prime); }
  Scalar angle(QuenchSide side) const { return side == QuenchSide::Initial ? theta : theta_prime; }

  void validate() const {
    if (!(m > 0) || !std::isfinite(m)) throw ValidationError("free theory: mass m must be > 0");
    if (!std::isfinite(theta) || !std::isfinite(theta_prime))
      throw ValidationError("free theory: theta and theta_prime must be finite");
  }

  static FreeParams from_dtheta(Scalar m, Scalar dtheta) { return {m, dtheta, Scalar(0)}; }
};

template <typename Scalar> struct GammaMatrices {
  Matrix2c<Scalar> g0, g1, g5;

  static GammaMatrices make(GammaConvention conv) {
    using C = Complex<Scalar>;
    const C i(0, 1);
    Matrix2c<Scalar> sx, sy, sz;
    sx << C(0), C(1), C(1), C(0);
    sy << C(0), -i, i, C(0);
    sz << C(1), C(0), C(0), C(-1);
    GammaMatrices g;
    g.g0 = conv == GammaConvention::Standard ? sz : sx;
    g.g1 = i * sy;
    g.g5 = g.g0 * g.g1;
    return g;
  }
};

template <typename Scalar>
Matrix2c<Scalar> pauli(int axis) {
  using C = Complex<Scalar>;
  Matrix2c<Scalar> s;
  switch (axis) {
    case 0: s << C(0), C(1), C(1), C(0); break;
    case 1: s << C(0), C(0, -1), C(0, 1), C(0); break;
    default: s << C(1), C(0), C(0), C(-1); break;
  }
  return s;
}

/// Single-mode Hamiltonian gamma0 (k gamma1 + m e^{i angle gamma5}).
template <typename Scalar>
Matrix2c<Scalar> mode_hamiltonian(Scalar k, Scalar m, Scalar angle, GammaConvention conv) {
  const auto g = GammaMatrices<Scalar>::make(conv);
  const Complex<Scalar> i(0, 1);
  const Matrix2c<Scalar> id = Matrix2c<Scalar>::Identity();
  const Matrix2c<Scalar> mass = m * (std::cos(angle) * id + i * std::sin(angle) * g.g5);
  return g.g0 * (k * g.g1 + mass);
}

template <typename Scalar = double> struct BlochMode {
  Scalar k;
  Vector3<Scalar> n_vec;  // h(k) = n_vec . (sigma_x, sigma_y, sigma_z)
  Scalar omega;
  Vector2c<Scalar> u_minus;
};

/// Normalized eigenvector of n.sigma with eigenvalue -|n|. Of the two
/// closed-form candidates the better conditioned one is used.
template <typename Scalar>
Vector2c<Scalar> lower_spinor(const Vector3<Scalar>& n) {
  using C = Complex<Scalar>;
  const Scalar w = n.norm();
  Vector2c<Scalar> a, b;
  a << -C(n(0), -n(1)), C(w + n(2));
  b << C(w - n(2)), -C(n(0), n(1));
  Vector2c<Scalar> u = a.squaredNorm() >= b.squaredNorm() ? a : b;
  return u / u.norm();
}

template <typename Scalar>
BlochMode<Scalar> bloch_mode(Scalar k, const FreeParams<Scalar>& p, QuenchSide side) {
  const Matrix2c<Scalar> h = mode_hamiltonian(k, p.m, p.angle(side), p.convention);
  BlochMode<Scalar> mode;
  mode.k = k;
  for (int a = 0; a < 3; ++a) mode.n_vec(a) = (h * pauli<Scalar>(a)).trace().real() / 2;
  mode.omega = std::hypot(k, p.m);
  mode.u_minus = lower_spinor(mode.n_vec);
  return mode;
}

/// Per-mode Loschmidt amplitude <u_-(theta)| exp(-i h_theta'(k) t) |u_-(theta)>.
///
/// With n, n' the Bloch vectors before and after the quench and |n| = |n'| = w,
/// the amplitude is cos(wt) + i c sin(wt), c = n.n'/w^2 = (k^2 + m^2 cos dtheta)/w^2.
template <typename Scalar>
Complex<Scalar> mode_amplitude(Scalar k, Scalar t, const FreeParams<Scalar>& p) {
  const Scalar w2 = k * k + p.m * p.m;
  const Scalar w = std::sqrt(w2);
  const Scalar c = (k * k + p.m * p.m * std::cos(p.dtheta())) / w2;
  return {std::cos(w * t), c * std::sin(w * t)};
}

template <typename Scalar = double> struct CriticalSet {
  std::optional<Scalar> k_c;
  std::vector<Scalar> t_c;  // t_c[n-1] = (2n-1) t_c[0]
  bool boundary = false;    // |dtheta| == pi/2 within rounding
};

template <typename Scalar>
CriticalSet<Scalar> critical_points(const FreeParams<Scalar>& p, int n_max) {
  if (n_max < 1) throw ValidationError("critical_points: n_max must be >= 1");
  CriticalSet<Scalar> cs;
  const Scalar c = std::cos(p.dtheta());
  if (std::abs(c) <= 64 * std::numeric_limits<Scalar>::epsilon()) {
    cs.boundary = true;
    return cs;
  }
  if (c > 0) return cs;
  const Scalar kc = p.m * std::sqrt(-c);
  cs.k_c = kc;
  const Scalar t1 = pi_v<Scalar> / (2 * std::hypot(kc, p.m));
  for (int n = 1; n <= n_max; ++n) cs.t_c.push_back(static_cast<Scalar>(2 * n - 1) * t1);
  return cs;
}

struct QuadratureSettings {
  double cutoff_factor = 50;  // Lambda = cutoff_factor * max(m, 1/t)
  double abs_tol = 1e-10;
  unsigned max_depth = 15;
};

/// Rate function -(1/2pi) \int_{-Lambda}^{Lambda} dk ln|L_k(t)| of the
/// infinite system. The integrand is even in k. It has a logarithmic peak at
/// k_c, which becomes an integrable singularity at t = t_c^(n), so the pieces
/// touching k_c use tanh-sinh and the smooth tail uses Gauss-Kronrod.
template <typename Scalar>
Scalar rate_function_free(Scalar t, const FreeParams<Scalar>& p, const QuadratureSettings& q = {}) {
  if (t < 0) throw ValidationError("rate_function_free: t must be >= 0");
  if (t == 0) return 0;
  const Scalar cutoff =
      static_cast<Scalar>(q.cutoff_factor) * std::max(p.m, Scalar(1) / t);
  auto integrand = [&](Scalar k) {
    const Scalar a = std::abs(mode_amplitude(k, t, p));
    return std::log(a);
  };
  const Scalar rel_tol = static_cast<Scalar>(q.abs_tol) / 16;
  Scalar total = 0;
  Scalar error_total = 0;
  Scalar tail_start = 0;
  if (const auto cs = critical_points(p, 1); cs.k_c && *cs.k_c + p.m < cutoff) {
    const Scalar kc = *cs.k_c;
    tail_start = kc + p.m;
    boost::math::quadrature::tanh_sinh<Scalar> ts(q.max_depth);
    for (const auto& [a, b] : {std::pair{Scalar(0), kc}, std::pair{kc, tail_start}}) {
      if (!(b > a)) continue;
      Scalar err = 0;
      total += ts.integrate(integrand, a, b, rel_tol, &err);
      error_total += err * (b - a) / 2;  // reported on the rescaled interval [-1, 1]
    }
  }
  {
    using Rule = boost::math::quadrature::gauss_kronrod<Scalar, 31>;
    Scalar err = 0;
    Scalar l1 = 0;
    total += Rule::integrate(integrand, tail_start, cutoff, q.max_depth, rel_tol, &err, &l1);
    error_total += err;
  }
  const Scalar rate = -total / pi_v<Scalar>;  // 2 * (1/2pi) from the even integrand
  if (!(error_total / pi_v<Scalar> <= static_cast<Scalar>(q.abs_tol)) || !std::isfinite(rate))
  {
    char buf[160];
    std::snprintf(buf, sizeof buf, "rate_function_free: quadrature did not converge at t=%.6g (error estimate %.3g)",
                  static_cast<double>(t), static_cast<double>(error_total / pi_v<Scalar>));
    throw NumericalError(buf);
  }
  return std::max(rate, Scalar(0));
}

/// Phase of the continuum correlator g(k,t) = L_k(t) sampled on a (k,t) grid.
template <typename Scalar>
PhaseField<Scalar> phase_field_free(const VectorX<Scalar>& k_grid, const VectorX<Scalar>& t_grid,
                                    const FreeParams<Scalar>& p) {
  ArrayXXc<Scalar> amp(t_grid.size(), k_grid.size());
  for (Index i = 0; i < t_grid.size(); ++i)
    for (Index j = 0; j < k_grid.size(); ++j) amp(i, j) = mode_amplitude(k_grid(j), t_grid(i), p);
  return PhaseField<Scalar>(k_grid, t_grid, std::move(amp));
}

}  // namespace tq
