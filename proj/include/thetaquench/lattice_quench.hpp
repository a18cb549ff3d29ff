#pragma once

// Observables of the lattice quench -m -> +m (dtheta = pi): the many-body
// Loschmidt amplitude, the two-time fermion correlator g(k, t), equal-time
// correlator components and the integer invariant nu(t).

#include <optional>
#include <string>
#include <vector>

#include "thetaquench/krylov.hpp"
#include "thetaquench/lattice.hpp"
#include "thetaquench/topology.hpp"

namespace tq {

using ArrayXXcd = Eigen::ArrayXXcd;
using ArrayXXd = Eigen::ArrayXXd;

/// Cell momenta 2 pi l / (N a) of the two-site unit cell, l = l_max - N/2 + 1 .. l_max
/// with l_max = floor(N/4): the reduced Brillouin zone (-pi/2a, pi/2a].
VectorXd reduced_momenta(const LatticeParams& p);

/// Momenta used for the (k, t) phase field: the reduced zone plus the copy of
/// the zone edge at -pi/2a when N/2 is even, so the grid is symmetric about 0.
VectorXd phase_field_momenta(const LatticeParams& p);

/// Lorentz components of F = (1/2) <[psi, psibar]> in momentum space,
/// indexed (t, k) over reduced_momenta.
struct EqualTimeCorrelators {
  ArrayXXd F_s, F_0, F_1, F_5;
  VectorXd K;       // prod_k |F(k,t) + F(k,0)|^2 over (F_s, F_1, F_5)
  VectorXd rate_K;  // -ln K / (2 N a)
};

struct ObservableSeries {
  VectorXd t;
  VectorXcd loschmidt;
  VectorXd rate;    // -ln|L| / (N a)
  VectorXd rate_g;  // -sum_k ln|g(k,t)| / (N a)
  VectorXd k;       // phase_field_momenta
  ArrayXXcd g;      // (t, k)
  EqualTimeCorrelators correlators;
  std::vector<int> nu;
  bool nu_reliable = true;
};

/// Quench from the ground state of the mass -m Hamiltonian to evolution with
/// mass +m, both in the neutral sector.
class LatticeQuench {
 public:
  explicit LatticeQuench(const LatticeParams& p, const SolverOptions& opts = {});

  const LatticeParams& params() const { return params_; }
  const FockBasis& basis() const { return basis_; }
  const HamiltonianMatrix& initial_hamiltonian() const { return h_initial_; }
  const HamiltonianMatrix& final_hamiltonian() const { return h_final_; }
  const GroundState& initial_state() const { return ground_; }

  /// L(t) = <Omega| exp(-i H_+ t) |Omega>.
  VectorXcd loschmidt(const VectorXd& t_grid) const;

  /// g(k, t) = sum_alpha <psi+_alpha(k, 0) psi_alpha(k, t)> on phase_field_momenta,
  /// built from G_mn(t) = <B(t)| c+_m |A_n(t)> with |A_n(t)> = exp(-iH_+ t) c_n |Omega>
  /// in the charge -1 sector and |B(t)> = exp(-iH_+ t) |Omega>.
  ArrayXXcd two_time_g(const VectorXd& t_grid) const;

  EqualTimeCorrelators equal_time_F(const VectorXd& t_grid) const;

  /// All observables plus nu(t) on one time grid.
  ObservableSeries run(const VectorXd& t_grid) const;

 private:
  LatticeParams params_;
  SolverOptions opts_;
  FockBasis basis_;
  HamiltonianMatrix h_initial_;
  HamiltonianMatrix h_final_;
  GroundState ground_;
  Propagator propagator_;
};

std::pair<VectorXcd, VectorXd> loschmidt_lattice(const LatticeParams& p, const VectorXd& t_grid,
                                                 const SolverOptions& opts = {});
ArrayXXcd two_time_g(const LatticeParams& p, const VectorXd& t_grid, const SolverOptions& opts = {});
EqualTimeCorrelators equal_time_F(const LatticeParams& p, const VectorXd& t_grid,
                                  const SolverOptions& opts = {});

/// Decompose a 2x2 matrix as F_s 1 + F_0 gamma0 + F_1 gamma1 + i F_5 gamma5 in
/// the standard representation; returns (F_s, F_0, F_1, F_5).
Eigen::Vector4d lorentz_components(const Eigen::Matrix2cd& f);

/// Index of the first strict local maximum (x[i] >= x[i-1], x[i] > x[i+1]).
std::optional<Index> first_local_max(const VectorXd& x);

/// First index whose nu differs from nu[0].
std::optional<Index> first_nu_change(const std::vector<int>& nu);

struct ScanPoint {
  double e_over_m = 0;
  std::optional<ObservableSeries> series;
  std::string error;  // non-empty when the point failed
};

/// One full run per coupling; `base` supplies N, a and m. Points run in
/// parallel, the result is ordered like e_grid. Failures are recorded per point.
std::vector<ScanPoint> scan_phase_diagram(const LatticeParams& base, const VectorXd& e_over_m,
                                          const VectorXd& t_grid, const SolverOptions& opts = {},
                                          unsigned threads = 0);

}  // namespace tq
