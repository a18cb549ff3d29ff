#pragma once

// Free staggered fermions (e = 0) solved in the single-particle space: the
// ground state is a Slater determinant, so every observable of the quench
// follows from N x N matrices. Shares no code with the many-body solver.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using Eigen::MatrixXcd;

/// Single-particle hopping matrix of the ring, h(n, m) such that
/// H = sum c+_n h(n, m) c_m.
inline MatrixXcd one_body(int sites, double a, double mass) {
  MatrixXcd h = MatrixXcd::Zero(sites, sites);
  const cd hop(0, -1.0 / (2 * a));
  for (int n = 0; n < sites; ++n) {
    h(n, n) = mass * (n % 2 == 0 ? 1.0 : -1.0);
    const int np = (n + 1) % sites;
    h(n, np) += hop;
    h(np, n) += std::conj(hop);
  }
  return h;
}

inline MatrixXcd propagator(const MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  const Eigen::VectorXcd ph = (es.eigenvalues().cast<cd>() * cd(0, -t)).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

struct Quench {
  int sites;
  double a;
  MatrixXcd orbitals;  // N x N/2, filled orbitals of the mass -m Hamiltonian
  MatrixXcd h_final;

  Quench(int n, double spacing, double m) : sites(n), a(spacing) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(one_body(n, spacing, -m));
    orbitals = es.eigenvectors().leftCols(n / 2);
    h_final = one_body(n, spacing, m);
  }

  cd loschmidt(double t) const {
    return (orbitals.adjoint() * propagator(h_final, t) * orbitals).determinant();
  }

  /// rho(n, m) = <c+_m c_n> at time t.
  MatrixXcd density(double t) const {
    const MatrixXcd phi = propagator(h_final, t) * orbitals;
    return phi * phi.adjoint();
  }

  /// sum_alpha <psi+_alpha(k, 0) psi_alpha(k, t)>, cells of two sites at x_j = 2 j a.
  cd g(double k, double t) const {
    const MatrixXcd corr = propagator(h_final, t) * density(0);  // <c+_n c_m(t)> at (m, n)
    const int cells = sites / 2;
    cd sum = 0;
    for (int alpha = 0; alpha < 2; ++alpha)
      for (int j = 0; j < cells; ++j)
        for (int jp = 0; jp < cells; ++jp)
          sum += std::exp(cd(0, k * 2 * a * (jp - j))) * corr(2 * j + alpha, 2 * jp + alpha);
    return sum / static_cast<double>(cells);
  }

  /// (F_s, F_0, F_1, F_5) of F = (1/2)(1 - 2P) sigma_z at momentum k.
  Eigen::Vector4d components(double k, double t) const {
    const MatrixXcd rho = density(t);
    const int cells = sites / 2;
    Eigen::Matrix2cd p = Eigen::Matrix2cd::Zero();
    for (int al = 0; al < 2; ++al)
      for (int be = 0; be < 2; ++be)
        for (int j = 0; j < cells; ++j)
          for (int jp = 0; jp < cells; ++jp)
            p(al, be) += std::exp(cd(0, k * 2 * a * (jp - j))) * rho(2 * j + al, 2 * jp + be);
    p /= static_cast<double>(cells);
    Eigen::Matrix2cd sz;
    sz << 1, 0, 0, -1;
    const Eigen::Matrix2cd f = 0.5 * (Eigen::Matrix2cd::Identity() - 2.0 * p) * sz;
    // f = F_s + F_0 sz + F_1 (i sy) + i F_5 sx
    const cd f00 = f(0, 0), f11 = f(1, 1), f01 = f(0, 1), f10 = f(1, 0);
    return {((f00 + f11) / 2.0).real(), ((f00 - f11) / 2.0).real(), ((f01 - f10) / 2.0).real(),
            ((f01 + f10) / cd(0, 2)).real()};
  }
};

}  // namespace oracle
