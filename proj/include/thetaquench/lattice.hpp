#pragma once

// Staggered-fermion lattice Schwinger model on a ring of N sites with the
// Gauss law solved for the electric field:
//
//   H = sum_n [ a E_n^2 / 2 + s m (-1)^n n_n ] - (i / 2a) sum_n (c+_n c_{n+1} - h.c.)
//
// Links are gauged away, the remaining constant background field is dropped,
// and s = +-1 selects the sign of the mass (theta = 0 or pi).

#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Sparse>

#include "thetaquench/errors.hpp"
#include "thetaquench/types.hpp"

namespace tq {

using Word = std::uint32_t;
using SparseMatrixXcd = Eigen::SparseMatrix<cplx>;

struct LatticeParams {
  int sites = 8;         // N, even
  double spacing = 0.8;  // a, in units of 1/m when m = 1
  double mass = 1.0;     // m
  double coupling = 0;   // e

  double volume() const { return sites * spacing; }
  void validate() const;

  /// Parameters from the dimensionless combinations a*m and e/m.
  static LatticeParams from_units(int sites, double am, double e_over_m, double m = 1.0) {
    return {sites, am / m, m, e_over_m * m};
  }
};

inline bool occupied(Word w, int n) { return (w >> n) & 1U; }

/// Staggered charge rho_n = n_n + ((-1)^n - 1)/2 of site n, in units of e.
inline int site_charge(Word w, int n) { return static_cast<int>(occupied(w, n)) - (n % 2); }

/// Occupation-number basis of a fixed total-charge sector.
class FockBasis {
 public:
  FockBasis(int sites, int charge, std::vector<Word> states);

  int sites() const { return sites_; }
  int charge() const { return charge_; }
  Index dim() const { return static_cast<Index>(states_.size()); }
  const std::vector<Word>& states() const { return states_; }
  Word state(Index i) const { return states_[static_cast<std::size_t>(i)]; }

  /// Position of `w`, or -1 when it is not in the sector.
  Index find(Word w) const {
    auto it = index_.find(w);
    return it == index_.end() ? Index(-1) : it->second;
  }

 private:
  int sites_;
  int charge_;
  std::vector<Word> states_;
  std::unordered_map<Word, Index> index_;
};

/// All words with total staggered charge `charge` (units of e), in increasing
/// numeric order. charge = 0 is half filling.
FockBasis build_basis(int sites, int charge);

/// Electric field on the N links from the Gauss law with the zero mode removed:
/// E_n = e (L_n - mean L), L_n = sum_{j <= n} rho_j.
VectorXd electric_field(Word w, const LatticeParams& p);

/// Sign of c+_to c_from acting on `w` (both sites distinct, `from` occupied,
/// `to` empty): (-1)^(number of occupied sites strictly between them).
int hopping_sign(Word w, int from, int to);

struct HamiltonianMatrix {
  SparseMatrixXcd matrix;
  LatticeParams params;
  int mass_sign = 1;
  int charge = 0;

  Index dim() const { return matrix.rows(); }
};

HamiltonianMatrix build_hamiltonian(const LatticeParams& p, const FockBasis& sector, int mass_sign);

/// c_site acting on a vector of `from`; the result lives in `to`, whose
/// charge must be one lower.
VectorXcd apply_annihilator(const FockBasis& from, const FockBasis& to, int site, const VectorXcd& v);

/// One-body density matrix rho(n, m) = <v| c+_m c_n |v>.
MatrixXcd one_body_density(const FockBasis& basis, const VectorXcd& v);

}  // namespace tq
