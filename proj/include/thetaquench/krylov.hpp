#pragma once

#include <functional>

#include "thetaquench/lattice.hpp"

namespace tq {

struct SolverOptions {
  Index dense_limit = 2000;       // dense eigendecomposition up to this dimension
  double residual_tol = 1e-10;    // ||H v - E v|| for iterative eigenpairs
  double degeneracy_tol = 1e-10;  // ground-state gap below this is flagged
  int lanczos_max = 120;          // Krylov dimension before an explicit restart
  int expm_dim = 30;              // Krylov dimension per propagation step
  double expm_tol = 1e-13;        // local error per propagation step
};

struct GroundState {
  double energy = 0;
  VectorXcd vector;
  double gap = 0;  // E_1 - E_0
  bool degenerate = false;
  double residual = 0;
};

GroundState ground_state(const HamiltonianMatrix& h, const SolverOptions& opts = {});

/// Lowest eigenpair of a Hermitian sparse matrix restricted to the orthogonal
/// complement of `deflate` (columns orthonormal, may be empty).
std::pair<double, VectorXcd> lanczos_lowest(const SparseMatrixXcd& h, const MatrixXcd& deflate,
                                            const SolverOptions& opts, double* residual = nullptr);

/// exp(-i H t) v by Lanczos projection with adaptive sub-stepping.
VectorXcd krylov_expm(const SparseMatrixXcd& h, const VectorXcd& v, double t, const SolverOptions& opts);

/// Time evolution under a fixed Hamiltonian. Small sectors are diagonalized
/// once; larger ones are propagated in Krylov steps.
class Propagator {
 public:
  explicit Propagator(const HamiltonianMatrix& h, const SolverOptions& opts = {});

  bool dense() const { return dense_; }
  Index dim() const { return matrix_.rows(); }

  /// exp(-i H t) v.
  VectorXcd evolve(const VectorXcd& v, double t) const;

  /// Evolve `v` along an increasing time grid starting at t >= 0 and hand
  /// each evolved state to `visit(index, state)`.
  void sweep(const VectorXcd& v, const VectorXd& t_grid,
             const std::function<void(Index, const VectorXcd&)>& visit) const;

  /// Same as sweep for every column of `block` at once.
  void sweep_block(const MatrixXcd& block, const VectorXd& t_grid,
                   const std::function<void(Index, const MatrixXcd&)>& visit) const;

  const VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  friend class Trajectory;
  SparseMatrixXcd matrix_;
  SolverOptions opts_;
  bool dense_ = false;
  VectorXd eigenvalues_;
  MatrixXcd eigenvectors_;
};

/// States exp(-i H t) X for a block X, advanced monotonically in t. Lets
/// several sectors be stepped side by side on one time grid.
class Trajectory {
 public:
  Trajectory(const Propagator& prop, MatrixXcd initial);

  /// Block at time t; t must not decrease between calls.
  const MatrixXcd& at(double t);

 private:
  const Propagator* prop_;
  MatrixXcd initial_;
  MatrixXcd coeffs_;  // dense mode: eigenbasis coefficients of the initial block
  MatrixXcd current_;
  double now_ = 0;
};

VectorXcd evolve(const HamiltonianMatrix& h, const VectorXcd& v, double t, const SolverOptions& opts = {});

}  // namespace tq
