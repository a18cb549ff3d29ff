#include <cmath>

#include <doctest.h>

#include "thetaquench/free_theory.hpp"

using namespace tq;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

FreeParams<double> quench(double dtheta, GammaConvention conv = GammaConvention::Standard) {
  auto p = FreeParams<double>::from_dtheta(1.0, dtheta);
  p.convention = conv;
  return p;
}

// <u|exp(-i h' t)|u> from numerical eigensolvers, no closed forms.
cplx amplitude_by_diagonalization(double k, double t, const FreeParams<double>& p) {
  const auto h0 = mode_hamiltonian(k, p.m, p.theta, p.convention);
  const auto h1 = mode_hamiltonian(k, p.m, p.theta_prime, p.convention);
  // gamma0 (k gamma1 + m e^{i theta gamma5}) is Hermitian; symmetrize rounding.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> e0(0.5 * (h0 + h0.adjoint()));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> e1(0.5 * (h1 + h1.adjoint()));
  const Eigen::Vector2cd u = e0.eigenvectors().col(0);
  Eigen::Vector2cd ph;
  for (int i = 0; i < 2; ++i) ph(i) = std::exp(cplx(0, -e1.eigenvalues()(i) * t));
  const Eigen::Matrix2cd prop = e1.eigenvectors() * ph.asDiagonal() * e1.eigenvectors().adjoint();
  return u.dot(prop * u);
}

double simpson_rate(double t, const FreeParams<double>& p, double cutoff, int panels) {
  const double h = cutoff / panels;
  double s = 0;
  for (int i = 0; i <= panels; ++i) {
    const double w = (i == 0 || i == panels) ? 1 : (i % 2 ? 4 : 2);
    s += w * std::log(std::abs(mode_amplitude(i * h, t, p)));
  }
  return -(s * h / 3) / kPi;
}

}  // namespace

TEST_CASE("mode Hamiltonian squares to omega^2") {
  for (auto conv : {GammaConvention::Standard, GammaConvention::Alternate})
    for (double angle : {0.0, 0.3, kPi, -2.0}) {
      const auto h = mode_hamiltonian(0.7, 1.3, angle, conv);
      CHECK((h - h.adjoint()).norm() < 1e-14);
      const Eigen::Matrix2cd h2 = h * h;
      CHECK((h2 - (0.49 + 1.69) * Eigen::Matrix2cd::Identity()).norm() < 1e-13);
    }
}

TEST_CASE("gamma matrices satisfy the Clifford algebra in both conventions") {
  for (auto conv : {GammaConvention::Standard, GammaConvention::Alternate}) {
    const auto g = GammaMatrices<double>::make(conv);
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    CHECK((g.g0 * g.g0 - id).norm() < 1e-15);
    CHECK((g.g1 * g.g1 + id).norm() < 1e-15);
    CHECK((g.g5 * g.g5 - id).norm() < 1e-15);
    CHECK((g.g0 * g.g1 + g.g1 * g.g0).norm() < 1e-15);
    CHECK((g.g5 * g.g0 + g.g0 * g.g5).norm() < 1e-15);
  }
}

TEST_CASE("lower spinor is the negative-energy eigenvector") {
  for (const Vector3<double> n : {Vector3<double>(0.3, -0.4, 1.2), Vector3<double>(0, 0, -2),
                                  Vector3<double>(1e-9, 0, -1), Vector3<double>(-0.5, 0.1, 0)}) {
    const auto u = lower_spinor(n);
    Eigen::Matrix2cd h = n(0) * pauli<double>(0) + n(1) * pauli<double>(1) + n(2) * pauli<double>(2);
    CHECK((h * u + n.norm() * u).norm() < 1e-14);
    CHECK(u.norm() == Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("closed-form amplitude matches direct diagonalization") {
  for (auto conv : {GammaConvention::Standard, GammaConvention::Alternate})
    for (double dtheta : {kPi, 0.45 * kPi, 0.2, -2.5})
      for (double k : {-2.5, -1.0, 0.0, 0.3, 1.7})
        for (double t : {0.0, 0.4, 1.1, 3.7}) {
          auto p = quench(dtheta, conv);
          p.theta = dtheta + 0.4;  // only the difference matters
          p.theta_prime = 0.4;
          CHECK(std::abs(mode_amplitude(k, t, p) - amplitude_by_diagonalization(k, t, p)) < 1e-12);
        }
}

TEST_CASE("amplitude properties") {
  const auto p = quench(0.8 * kPi);
  for (double k = -3; k <= 3; k += 0.37) {
    CHECK(std::abs(mode_amplitude(k, 0.0, p) - cplx(1, 0)) < 1e-15);
    for (double t = 0; t < 8; t += 0.61) {
      CHECK(std::abs(mode_amplitude(k, t, p)) <= 1 + 1e-15);
      CHECK(std::abs(mode_amplitude(k, t, p) - mode_amplitude(-k, t, p)) < 1e-15);
    }
  }
  // No quench: the state is stationary.
  const auto q = quench(0.0);
  CHECK(std::abs(mode_amplitude(0.9, 2.0, q)) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("critical points") {
  SUBCASE("dtheta = pi") {
    const auto cs = critical_points(quench(kPi), 3);
    REQUIRE(cs.k_c);
    CHECK(std::abs(*cs.k_c - 1.0) < 1e-12);
    REQUIRE(cs.t_c.size() == 3);
    CHECK(std::abs(cs.t_c[0] - kPi / (2 * std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(cs.t_c[1] - 3 * cs.t_c[0]) < 1e-12);
    CHECK(std::abs(cs.t_c[2] - 5 * cs.t_c[0]) < 1e-12);
    CHECK(std::abs(mode_amplitude(*cs.k_c, cs.t_c[1], quench(kPi))) < 1e-15);
  }
  SUBCASE("no critical set inside |dtheta| < pi/2") {
    const auto cs = critical_points(quench(0.45 * kPi), 3);
    CHECK_FALSE(cs.k_c);
    CHECK(cs.t_c.empty());
    CHECK_FALSE(cs.boundary);
  }
  SUBCASE("boundary") {
    const auto cs = critical_points(quench(kPi / 2), 1);
    CHECK(cs.boundary);
    CHECK_FALSE(cs.k_c);
  }
  SUBCASE("general angle scales with m") {
    auto p = quench(0.8 * kPi);
    p.m = 2.5;
    const auto cs = critical_points(p, 1);
    REQUIRE(cs.k_c);
    CHECK(*cs.k_c == Approx(2.5 * std::sqrt(-std::cos(0.8 * kPi))));
    CHECK(std::abs(mode_amplitude(*cs.k_c, cs.t_c[0], p)) < 1e-14);
  }
  CHECK_THROWS_AS(critical_points(quench(kPi), 0), ValidationError);
}

TEST_CASE("rate function agrees with a fine Simpson rule away from t_c") {
  for (double dtheta : {kPi, 0.45 * kPi})
    for (double t : {0.5, 2.0, 4.2}) {
      const auto p = quench(dtheta);
      const double cutoff = 50 * std::max(1.0, 1 / t);
      CHECK(rate_function_free(t, p) == Approx(simpson_rate(t, p, cutoff, 400000)).epsilon(1e-8));
    }
}

TEST_CASE("rate function is finite and non-negative at the critical times") {
  const auto p = quench(kPi);
  for (double tc : critical_points(p, 3).t_c) {
    const double g = rate_function_free(tc, p);
    CHECK(std::isfinite(g));
    CHECK(g > 0);
  }
  CHECK(rate_function_free(0.0, p) == 0);
  CHECK_THROWS_AS(rate_function_free(-1.0, p), ValidationError);
}

TEST_CASE("cutoff error falls like 1/Lambda") {
  const auto p = quench(kPi);
  const double t = 2.3;
  auto rate = [&](double f) {
    QuadratureSettings q;
    q.cutoff_factor = f;
    return rate_function_free(t, p, q);
  };
  const double r1 = rate(50), r2 = rate(100), r4 = rate(200);
  CHECK((r1 - r2) / (r2 - r4) == Approx(2.0).epsilon(0.1));
  CHECK(std::abs(r1 - r2) < 1.5 / (100 * kPi));
}

TEST_CASE("rate function does not depend on the gamma representation") {
  for (double t : {0.7, 1.1107207345395915, 3.0}) {
    const double a = rate_function_free(t, quench(kPi, GammaConvention::Standard));
    const double b = rate_function_free(t, quench(kPi, GammaConvention::Alternate));
    CHECK(a == Approx(b).epsilon(1e-13));
  }
}

TEST_CASE("free parameters") {
  auto p = quench(1.5 * kPi);
  CHECK(p.dtheta() == Approx(-0.5 * kPi));
  p.m = 0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  CHECK(wrap_angle(kPi) == Approx(kPi));
  CHECK(wrap_angle(-kPi) == Approx(kPi));
}

TEST_CASE("phase field of the free quench") {
  const VectorXd k = symmetric_grid(3.0, 4);
  const VectorXd t = uniform_grid(0.0, 2.0, 5);
  const auto f = phase_field_free(k, t, quench(kPi));
  CHECK(f.amp().rows() == 5);
  CHECK(f.amp().cols() == 9);
  CHECK(f.zero_column() == 4);
  for (Index j = 0; j < 9; ++j) CHECK(f.phase()(0, j) == 0);
}

TEST_CASE("Bloch vectors at simple points") {
  auto mode = [](double k, double angle) {
    FreeParams<double> p;
    p.theta = angle;
    return bloch_mode(k, p, QuenchSide::Initial);
  };
  auto check_eigenpair = [](const BlochMode<double>& b) {
    Eigen::Matrix2cd h = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 3; ++a) h += b.n_vec(a) * pauli<double>(a);
    CHECK((h * b.u_minus + b.omega * b.u_minus).norm() < 1e-12);
    CHECK(b.u_minus.norm() == Approx(1.0).epsilon(1e-14));
  };
  const auto a = mode(0.0, 0.0);
  CHECK((a.n_vec - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
  CHECK(a.omega == 1.0);
  CHECK(std::abs(a.u_minus(0)) < 1e-15);
  CHECK(std::abs(a.u_minus(1)) == Approx(1.0));
  check_eigenpair(a);
  const auto b = mode(1.0, kPi);
  CHECK((b.n_vec - Eigen::Vector3d(1, 0, -1)).norm() < 1e-15);
  CHECK(b.omega == Approx(std::sqrt(2.0)).epsilon(1e-15));
  check_eigenpair(b);
  const auto c = mode(1.0, kPi / 2);
  CHECK((c.n_vec - Eigen::Vector3d(1, -1, 0)).norm() < 1e-15);
  check_eigenpair(c);
  // Against an independent eigensolver.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(mode_hamiltonian(1.0, 1.0, kPi / 2, GammaConvention::Standard));
  CHECK(es.eigenvalues()(0) == Approx(-std::sqrt(2.0)).epsilon(1e-14));
  CHECK(std::abs(std::abs(es.eigenvectors().col(0).dot(c.u_minus)) - 1) < 1e-12);
}

TEST_CASE("zero mode under the dtheta = pi quench only picks up a phase") {
  const auto p = quench(kPi);
  for (double t = 0; t < 10; t += 0.73) {
    CHECK(std::abs(mode_amplitude(0.0, t, p) - std::exp(cplx(0, -t))) < 1e-15);
    CHECK(std::abs(mode_amplitude(0.0, t, p) - amplitude_by_diagonalization(0.0, t, p)) < 1e-12);
  }
}
