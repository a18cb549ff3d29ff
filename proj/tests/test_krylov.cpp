#include <cmath>
#include <random>

#include <doctest.h>

#include "thetaquench/krylov.hpp"
#include "thetaquench/lattice.hpp"

using namespace tq;

namespace {

VectorXcd probe(Index n) {
  VectorXcd v(n);
  for (Index i = 0; i < n; ++i) v(i) = cplx(std::cos(0.9 * i + 0.2), std::sin(0.4 * i * i));
  return v / v.norm();
}

HamiltonianMatrix schwinger(int n, double e_over_m, int sign = 1, int charge = 0) {
  return build_hamiltonian(LatticeParams::from_units(n, 0.8, e_over_m), build_basis(n, charge), sign);
}

SolverOptions iterative() {
  SolverOptions o;
  o.dense_limit = 0;
  return o;
}

}  // namespace

TEST_CASE("two-level propagator against the closed form") {
  // H = tau + Omega (n . sigma): exp(-iHt) = e^{-i tau t} (cos Omega t - i sin Omega t n.sigma)
  const double tau = 0.3, nx = 0.6, ny = -0.8, om = 1.7;
  Eigen::Matrix2cd h;
  h << tau, om * cplx(nx, -ny), om * cplx(nx, ny), tau;
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) trip.emplace_back(i, j, h(i, j));
  HamiltonianMatrix hm;
  hm.matrix.resize(2, 2);
  hm.matrix.setFromTriplets(trip.begin(), trip.end());
  const Eigen::Vector2cd v(cplx(0.6, 0.1), cplx(-0.2, 0.77));
  for (double t : {0.0, 0.1, 1.0, 7.3}) {
    const Eigen::Matrix2cd ns = (h - tau * Eigen::Matrix2cd::Identity()) / om;
    const Eigen::Matrix2cd u =
        std::exp(cplx(0, -tau * t)) * (std::cos(om * t) * Eigen::Matrix2cd::Identity() - cplx(0, std::sin(om * t)) * ns);
    const Eigen::Vector2cd exact = u * v;
    CHECK((evolve(hm, v, t) - exact).norm() < 1e-13);
    CHECK((krylov_expm(hm.matrix, v, t, {}) - exact).norm() < 1e-12);
  }
}

TEST_CASE("Krylov propagation agrees with dense diagonalization") {
  const auto h = schwinger(8, 1.0);
  const VectorXcd v = probe(h.dim());
  const Propagator dense(h), krylov(h, iterative());
  CHECK(dense.dense());
  CHECK_FALSE(krylov.dense());
  for (double t : {0.05, 1.0, 4.5, 20.0}) {
    const VectorXcd a = dense.evolve(v, t), b = krylov.evolve(v, t);
    CHECK((a - b).norm() < 1e-10);
    CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("trajectory steps match one-shot evolution in both modes") {
  const auto h = schwinger(6, 0.5, -1, -1);
  MatrixXcd block(h.dim(), 3);
  for (Index c = 0; c < 3; ++c) block.col(c) = probe(h.dim()).array() * std::exp(cplx(0, 0.3 * c));
  for (const auto& opts : {SolverOptions{}, iterative()}) {
    const Propagator prop(h, opts);
    Trajectory traj(prop, block);
    for (double t : {0.0, 0.5, 0.5, 2.25, 6.0}) {
      const MatrixXcd& x = traj.at(t);
      for (Index c = 0; c < 3; ++c) CHECK((x.col(c) - prop.evolve(block.col(c), t)).norm() < 1e-10);
    }
    CHECK_THROWS_AS(traj.at(1.0), ValidationError);
  }
}

TEST_CASE("sweep visits every grid time and rejects unordered grids") {
  const auto h = schwinger(4, 1.0);
  const Propagator prop(h);
  VectorXd t(4);
  t << 0, 0.5, 1.0, 3.0;
  int visits = 0;
  const VectorXcd v = probe(h.dim());
  prop.sweep(v, t, [&](Index i, const VectorXcd& x) {
    CHECK((x - prop.evolve(v, t(i))).norm() < 1e-12);
    ++visits;
  });
  CHECK(visits == 4);
  t(2) = 0.2;
  CHECK_THROWS_AS(prop.sweep(v, t, [](Index, const VectorXcd&) {}), ValidationError);
}

TEST_CASE("Lanczos ground state and gap agree with dense") {
  for (double e : {0.0, 1.0, 2.5}) {
    const auto h = schwinger(8, e, -1);
    const auto a = ground_state(h);
    const auto b = ground_state(h, iterative());
    CHECK(std::abs(a.energy - b.energy) < 1e-10);
    CHECK(std::abs(a.gap - b.gap) < 1e-8);
    CHECK(std::abs(std::abs(a.vector.dot(b.vector)) - 1) < 1e-9);
    CHECK(b.residual < 1e-10);
    CHECK_FALSE(a.degenerate);
  }
}

TEST_CASE("ground state phase convention is fixed") {
  const auto g = ground_state(schwinger(6, 1.0, -1));
  Index imax = 0;
  g.vector.cwiseAbs().maxCoeff(&imax);
  CHECK(g.vector(imax).imag() == doctest::Approx(0).epsilon(1e-15));
  CHECK(g.vector(imax).real() > 0);
}

TEST_CASE("degenerate ground states are flagged") {
  // Diagonal matrix with a doubly degenerate minimum.
  HamiltonianMatrix h;
  h.matrix.resize(3, 3);
  std::vector<Eigen::Triplet<cplx>> trip{{0, 0, -1.0}, {1, 1, -1.0}, {2, 2, 2.0}};
  h.matrix.setFromTriplets(trip.begin(), trip.end());
  CHECK(ground_state(h).degenerate);
}

TEST_CASE("eigenvectors only acquire a phase") {
  const auto h = schwinger(8, 1.0);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es{MatrixXcd(h.matrix)};
  const Propagator krylov(h, iterative());
  for (Index n : {Index(0), Index(5), h.dim() - 1}) {
    const VectorXcd w = es.eigenvectors().col(n);
    const double e = es.eigenvalues()(n);
    for (double t : {0.3, 7.0}) CHECK((krylov.evolve(w, t) - std::exp(cplx(0, -e * t)) * w).norm() < 1e-10);
  }
}

TEST_CASE("norm and energy are conserved along a trajectory") {
  const auto h = schwinger(8, 1.0);
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss;
  VectorXcd v(h.dim());
  for (Index i = 0; i < v.size(); ++i) v(i) = cplx(gauss(rng), gauss(rng));
  v.normalize();
  const double e0 = v.dot(h.matrix * v).real();
  for (const auto& opts : {SolverOptions{}, iterative()}) {
    const Propagator prop(h, opts);
    for (double t = 0.5; t <= 20; t += 0.5) {
      const VectorXcd u = prop.evolve(v, t);
      CHECK(std::abs(u.norm() - 1) < 1e-10);
      CHECK(std::abs(u.dot(h.matrix * u).real() - e0) < 1e-10);
    }
  }
}
