#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "thetaquench/errors.hpp"
#include "thetaquench/lattice_quench.hpp"

namespace tq {
namespace {

constexpr cplx kI(0, 1);

int cells(const LatticeParams& p) { return p.sites / 2; }

/// Rows alpha = 0 (even sites) and 1 (odd sites) of the Fourier map
/// psi_alpha(k) = M^{-1/2} sum_j exp(-i k x_j) c_{2j+alpha}, x_j = 2 j a.
Eigen::Matrix<cplx, 2, Eigen::Dynamic> fourier_rows(const LatticeParams& p, double k) {
  const int m_cells = cells(p);
  Eigen::Matrix<cplx, 2, Eigen::Dynamic> u = Eigen::Matrix<cplx, 2, Eigen::Dynamic>::Zero(2, p.sites);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m_cells));
  for (int j = 0; j < m_cells; ++j) {
    const cplx phase = std::exp(-kI * k * (2.0 * j * p.spacing)) * norm;
    u(0, 2 * j) = phase;
    u(1, 2 * j + 1) = phase;
  }
  return u;
}

Eigen::Matrix2cd gamma0() {
  Eigen::Matrix2cd g;
  g << 1, 0, 0, -1;
  return g;
}

}  // namespace

VectorXd reduced_momenta(const LatticeParams& p) {
  const int m_cells = cells(p);
  const int l_max = m_cells / 2;
  const int l_min = l_max - m_cells + 1;
  VectorXd k(m_cells);
  for (int l = l_min; l <= l_max; ++l)
    k(l - l_min) = 2.0 * std::numbers::pi * l / (p.sites * p.spacing);
  return k;
}

VectorXd phase_field_momenta(const LatticeParams& p) {
  const VectorXd k = reduced_momenta(p);
  if (cells(p) % 2 != 0) return k;
  VectorXd out(k.size() + 1);
  out(0) = -k(k.size() - 1);
  out.tail(k.size()) = k;
  return out;
}

Eigen::Vector4d lorentz_components(const Eigen::Matrix2cd& f) {
  // gamma0 = sz, gamma1 = i sy, gamma5 = sx; gamma1^2 = -1.
  Eigen::Matrix2cd g0, g1, g5;
  g0 << 1, 0, 0, -1;
  g1 << 0, 1, -1, 0;
  g5 << 0, 1, 1, 0;
  Eigen::Vector4d c;
  c(0) = (0.5 * f.trace()).real();
  c(1) = (0.5 * (f * g0).trace()).real();
  c(2) = (-0.5 * (f * g1).trace()).real();
  c(3) = (-0.5 * kI * (f * g5).trace()).real();
  return c;
}

LatticeQuench::LatticeQuench(const LatticeParams& p, const SolverOptions& opts)
    : params_((p.validate(), p)),
      opts_(opts),
      basis_(build_basis(p.sites, 0)),
      h_initial_(build_hamiltonian(p, basis_, -1)),
      h_final_(build_hamiltonian(p, basis_, +1)),
      ground_(ground_state(h_initial_, opts)),
      propagator_(h_final_, opts) {
  if (ground_.degenerate)
    throw NumericalError("LatticeQuench: initial ground state is degenerate (gap " +
                         std::to_string(ground_.gap) + "); quench observables would be ambiguous");
}

VectorXcd LatticeQuench::loschmidt(const VectorXd& t_grid) const {
  VectorXcd out(t_grid.size());
  propagator_.sweep(ground_.vector, t_grid,
                    [&](Index i, const VectorXcd& b) { out(i) = ground_.vector.dot(b); });
  return out;
}

ArrayXXcd LatticeQuench::two_time_g(const VectorXd& t_grid) const {
  const FockBasis charged = build_basis(params_.sites, -1);
  const HamiltonianMatrix h_charged = build_hamiltonian(params_, charged, +1);
  const Propagator prop_charged(h_charged, opts_);
  const int n_sites = params_.sites;

  MatrixXcd holes(charged.dim(), n_sites);
  for (int n = 0; n < n_sites; ++n) holes.col(n) = apply_annihilator(basis_, charged, n, ground_.vector);

  const VectorXd k = phase_field_momenta(params_);
  std::vector<Eigen::Matrix<cplx, 2, Eigen::Dynamic>> rows;
  for (Index c = 0; c < k.size(); ++c) rows.push_back(fourier_rows(params_, k(c)));

  Trajectory neutral(propagator_, ground_.vector);
  Trajectory hole_states(prop_charged, holes);
  ArrayXXcd g(t_grid.size(), k.size());
  MatrixXcd b_holes(charged.dim(), n_sites);
  for (Index i = 0; i < t_grid.size(); ++i) {
    const VectorXcd b = neutral.at(t_grid(i)).col(0);
    const MatrixXcd& a = hole_states.at(t_grid(i));
    for (int m = 0; m < n_sites; ++m) b_holes.col(m) = apply_annihilator(basis_, charged, m, b);
    // G(m, n) = <B| c+_m |A_n>; the correlator <c+_n(0) c_m(t)> is its conjugate.
    const MatrixXcd corr = (b_holes.adjoint() * a).conjugate();
    for (Index c = 0; c < k.size(); ++c) g(i, c) = (rows[c] * corr * rows[c].adjoint()).trace();
  }
  return g;
}

EqualTimeCorrelators LatticeQuench::equal_time_F(const VectorXd& t_grid) const {
  const VectorXd k = reduced_momenta(params_);
  std::vector<Eigen::Matrix<cplx, 2, Eigen::Dynamic>> rows;
  for (Index c = 0; c < k.size(); ++c) rows.push_back(fourier_rows(params_, k(c)));

  EqualTimeCorrelators out;
  const Index nt = t_grid.size();
  out.F_s.resize(nt, k.size());
  out.F_0.resize(nt, k.size());
  out.F_1.resize(nt, k.size());
  out.F_5.resize(nt, k.size());
  out.K.resize(nt);
  out.rate_K.resize(nt);

  const Eigen::Matrix2cd g0 = gamma0();
  propagator_.sweep(ground_.vector, t_grid, [&](Index i, const VectorXcd& b) {
    const MatrixXcd rho = one_body_density(basis_, b);
    for (Index c = 0; c < k.size(); ++c) {
      // P(a, b) = <psi+_b(k) psi_a(k)>; <[psi_a, psi+_b]> = 1 - 2P.
      const Eigen::Matrix2cd occ = rows[c] * rho * rows[c].adjoint();
      const Eigen::Matrix2cd f = 0.5 * (Eigen::Matrix2cd::Identity() - 2.0 * occ) * g0;
      const Eigen::Vector4d comp = lorentz_components(f);
      out.F_s(i, c) = comp(0);
      out.F_0(i, c) = comp(1);
      out.F_1(i, c) = comp(2);
      out.F_5(i, c) = comp(3);
    }
  });
  const double volume = params_.volume();
  for (Index i = 0; i < nt; ++i) {
    double prod = 1;
    for (Index c = 0; c < k.size(); ++c) {
      const Eigen::Vector3d now(out.F_s(i, c), out.F_1(i, c), out.F_5(i, c));
      const Eigen::Vector3d start(out.F_s(0, c), out.F_1(0, c), out.F_5(0, c));
      prod *= (now + start).squaredNorm();
    }
    out.K(i) = prod;
    out.rate_K(i) = -std::log(prod) / (2.0 * volume);
  }
  return out;
}

ObservableSeries LatticeQuench::run(const VectorXd& t_grid) const {
  if (t_grid.size() == 0 || t_grid(0) != 0) throw ValidationError("LatticeQuench::run: t_grid must start at 0");
  ObservableSeries s;
  s.t = t_grid;
  s.loschmidt = loschmidt(t_grid);
  const double volume = params_.volume();
  s.rate = -s.loschmidt.cwiseAbs().array().log() / volume;
  s.k = phase_field_momenta(params_);
  s.g = two_time_g(t_grid);
  s.correlators = equal_time_F(t_grid);

  // rate_g over the reduced zone only; the duplicated edge column is skipped.
  s.rate_g = -(s.g.rightCols(cells(params_)).abs().log().rowwise().sum()) / volume;

  const PhaseField<double> field(s.k, t_grid, s.g);
  for (const auto& w : nu_series(field)) {
    s.nu.push_back(w.nu);
    s.nu_reliable = s.nu_reliable && w.reliable;
  }
  return s;
}

std::pair<VectorXcd, VectorXd> loschmidt_lattice(const LatticeParams& p, const VectorXd& t_grid,
                                                 const SolverOptions& opts) {
  const LatticeQuench q(p, opts);
  VectorXcd amp = q.loschmidt(t_grid);
  VectorXd rate = -amp.cwiseAbs().array().log() / p.volume();
  return {std::move(amp), std::move(rate)};
}

ArrayXXcd two_time_g(const LatticeParams& p, const VectorXd& t_grid, const SolverOptions& opts) {
  return LatticeQuench(p, opts).two_time_g(t_grid);
}

EqualTimeCorrelators equal_time_F(const LatticeParams& p, const VectorXd& t_grid, const SolverOptions& opts) {
  return LatticeQuench(p, opts).equal_time_F(t_grid);
}

std::optional<Index> first_local_max(const VectorXd& x) {
  for (Index i = 1; i + 1 < x.size(); ++i)
    if (x(i) >= x(i - 1) && x(i) > x(i + 1)) return i;
  return std::nullopt;
}

std::optional<Index> first_nu_change(const std::vector<int>& nu) {
  for (std::size_t i = 1; i < nu.size(); ++i)
    if (nu[i] != nu[0]) return static_cast<Index>(i);
  return std::nullopt;
}

std::vector<ScanPoint> scan_phase_diagram(const LatticeParams& base, const VectorXd& e_over_m,
                                          const VectorXd& t_grid, const SolverOptions& opts,
                                          unsigned threads) {
  base.validate();
  std::vector<ScanPoint> out(static_cast<std::size_t>(e_over_m.size()));
  auto work = [&](std::size_t idx) {
    ScanPoint& pt = out[idx];
    pt.e_over_m = e_over_m(static_cast<Index>(idx));
    try {
      LatticeParams p = base;
      p.coupling = pt.e_over_m * base.mass;
      pt.series = LatticeQuench(p, opts).run(t_grid);
    } catch (const std::exception& ex) {
      pt.error = ex.what();
    }
  };
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  std::size_t next = 0;
  while (next < out.size()) {
    std::vector<std::future<void>> batch;
    for (unsigned w = 0; w < threads && next < out.size(); ++w, ++next)
      batch.push_back(std::async(std::launch::async, work, next));
    for (auto& f : batch) f.get();
  }
  return out;
}

}  // namespace tq
