#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "thetaquench/errors.hpp"
#include "thetaquench/krylov.hpp"

namespace tq {
namespace {

void project_out(VectorXcd& w, const MatrixXcd& basis, Index columns) {
  // Two passes of classical Gram-Schmidt keep the basis orthogonal to
  // working precision.
  for (int pass = 0; pass < 2; ++pass) {
    if (columns == 0) return;
    const VectorXcd c = basis.leftCols(columns).adjoint() * w;
    w.noalias() -= basis.leftCols(columns) * c;
  }
}

struct LanczosBasis {
  MatrixXcd v;       // orthonormal Krylov vectors
  VectorXd alpha;    // diagonal of T
  VectorXd beta;     // off-diagonal of T, beta(j) couples j and j+1
  Index size = 0;
  double next_beta = 0;  // norm of the residual after the last vector
};

LanczosBasis lanczos(const SparseMatrixXcd& h, const VectorXcd& start, const MatrixXcd& deflate,
                     Index max_dim) {
  const Index n = h.rows();
  max_dim = std::min(max_dim, n - deflate.cols());
  LanczosBasis lb;
  lb.v.resize(n, max_dim);
  lb.alpha.resize(max_dim);
  lb.beta.resize(max_dim);
  VectorXcd q = start;
  project_out(q, deflate, deflate.cols());
  q /= q.norm();
  for (Index j = 0; j < max_dim; ++j) {
    lb.v.col(j) = q;
    VectorXcd w = h * q;
    lb.alpha(j) = q.dot(w).real();
    w -= lb.alpha(j) * q;
    if (j > 0) w -= lb.beta(j - 1) * lb.v.col(j - 1);
    project_out(w, lb.v, j + 1);
    project_out(w, deflate, deflate.cols());
    const double b = w.norm();
    lb.size = j + 1;
    lb.next_beta = b;
    if (j + 1 < max_dim) lb.beta(j) = b;
    if (b < 1e-13) break;  // invariant subspace
    q = w / b;
  }
  return lb;
}

Eigen::SelfAdjointEigenSolver<MatrixXd> tridiagonal_eigen(const LanczosBasis& lb) {
  MatrixXd t = MatrixXd::Zero(lb.size, lb.size);
  for (Index j = 0; j < lb.size; ++j) {
    t(j, j) = lb.alpha(j);
    if (j + 1 < lb.size) t(j, j + 1) = t(j + 1, j) = lb.beta(j);
  }
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(t);
}

VectorXcd deterministic_start(Index n) {
  // Fixed, generic start vector so runs are reproducible.
  VectorXcd s(n);
  for (Index i = 0; i < n; ++i) s(i) = cplx(1.0 + 0.37 * std::sin(1.3 * i + 0.1), 0.21 * std::cos(0.7 * i));
  return s;
}

}  // namespace

std::pair<double, VectorXcd> lanczos_lowest(const SparseMatrixXcd& h, const MatrixXcd& deflate,
                                            const SolverOptions& opts, double* residual) {
  VectorXcd x = deterministic_start(h.rows());
  double res = std::numeric_limits<double>::infinity();
  double energy = 0;
  for (int restart = 0; restart < 200; ++restart) {
    const auto lb = lanczos(h, x, deflate, opts.lanczos_max);
    const auto es = tridiagonal_eigen(lb);
    const VectorXd s = es.eigenvectors().col(0);
    energy = es.eigenvalues()(0);
    x = lb.v.leftCols(lb.size) * s;
    x /= x.norm();
    res = (h * x - energy * x).norm();
    if (res < opts.residual_tol) break;
  }
  if (residual) *residual = res;
  if (!(res < opts.residual_tol))
    throw NumericalError("lanczos_lowest: residual " + std::to_string(res) + " above tolerance");
  return {energy, x};
}

GroundState ground_state(const HamiltonianMatrix& h, const SolverOptions& opts) {
  GroundState gs;
  const Index n = h.dim();
  if (n == 1) {
    gs.energy = h.matrix.coeff(0, 0).real();
    gs.vector = VectorXcd::Ones(1);
    gs.gap = std::numeric_limits<double>::infinity();
    return gs;
  }
  if (n <= opts.dense_limit) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(MatrixXcd(h.matrix));
    gs.energy = es.eigenvalues()(0);
    gs.vector = es.eigenvectors().col(0);
    gs.gap = es.eigenvalues()(1) - es.eigenvalues()(0);
    gs.residual = (h.matrix * gs.vector - gs.energy * gs.vector).norm();
  } else {
    auto [e0, v0] = lanczos_lowest(h.matrix, MatrixXcd(n, 0), opts, &gs.residual);
    auto [e1, v1] = lanczos_lowest(h.matrix, v0, opts);
    (void)v1;
    gs.energy = e0;
    gs.vector = std::move(v0);
    gs.gap = e1 - e0;
  }
  // Fix the global phase: largest component real and positive.
  Index imax = 0;
  gs.vector.cwiseAbs().maxCoeff(&imax);
  gs.vector *= std::conj(gs.vector(imax)) / std::abs(gs.vector(imax));
  gs.degenerate = gs.gap < opts.degeneracy_tol;
  return gs;
}

VectorXcd krylov_expm(const SparseMatrixXcd& h, const VectorXcd& v, double t, const SolverOptions& opts) {
  VectorXcd x = v;
  const double norm = v.norm();
  if (t == 0 || norm == 0) return x;
  double remaining = t;
  double step = t;
  int guard = 0;
  while (remaining > 0) {
    if (++guard > 100000) throw NumericalError("krylov_expm: step size collapsed");
    step = std::min(step, remaining);
    const double xnorm = x.norm();
    const auto lb = lanczos(h, x, MatrixXcd(h.rows(), 0), opts.expm_dim);
    const auto es = tridiagonal_eigen(lb);
    // y = exp(-i T step) e_1
    const VectorXcd phases = (-cplx(0, 1) * step * es.eigenvalues().cast<cplx>()).array().exp();
    const VectorXcd y =
        es.eigenvectors().cast<cplx>() * phases.cwiseProduct(es.eigenvectors().row(0).transpose().cast<cplx>());
    const bool exact = lb.next_beta < 1e-13 || lb.size == h.rows();
    const double err = exact ? 0.0 : xnorm * lb.next_beta * std::abs(y(lb.size - 1));
    if (err > opts.expm_tol * xnorm && step > 1e-12) {
      step *= 0.5;
      continue;
    }
    x = xnorm * (lb.v.leftCols(lb.size) * y);
    remaining -= step;
    if (err < 0.1 * opts.expm_tol * xnorm) step *= 1.5;
  }
  return x;
}

Propagator::Propagator(const HamiltonianMatrix& h, const SolverOptions& opts)
    : matrix_(h.matrix), opts_(opts), dense_(h.dim() <= opts.dense_limit) {
  if (dense_) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es{MatrixXcd(matrix_)};
    if (es.info() != Eigen::Success) throw NumericalError("Propagator: eigendecomposition failed");
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
  }
}

VectorXcd Propagator::evolve(const VectorXcd& v, double t) const {
  if (v.size() != dim()) throw ValidationError("Propagator::evolve: dimension mismatch");
  if (!dense_) return krylov_expm(matrix_, v, t, opts_);
  const VectorXcd c = eigenvectors_.adjoint() * v;
  const VectorXcd phases = (-cplx(0, 1) * t * eigenvalues_.cast<cplx>()).array().exp();
  return eigenvectors_ * phases.cwiseProduct(c);
}

void Propagator::sweep(const VectorXcd& v, const VectorXd& t_grid,
                       const std::function<void(Index, const VectorXcd&)>& visit) const {
  sweep_block(v, t_grid, [&](Index i, const MatrixXcd& x) { visit(i, x.col(0)); });
}

void Propagator::sweep_block(const MatrixXcd& block, const VectorXd& t_grid,
                             const std::function<void(Index, const MatrixXcd&)>& visit) const {
  for (Index i = 1; i < t_grid.size(); ++i)
    if (!(t_grid(i) > t_grid(i - 1))) throw ValidationError("Propagator::sweep: t_grid not increasing");
  Trajectory traj(*this, block);
  for (Index i = 0; i < t_grid.size(); ++i) visit(i, traj.at(t_grid(i)));
}

Trajectory::Trajectory(const Propagator& prop, MatrixXcd initial)
    : prop_(&prop), initial_(std::move(initial)) {
  if (initial_.rows() != prop.dim()) throw ValidationError("Trajectory: dimension mismatch");
  if (prop.dense_) coeffs_ = prop.eigenvectors_.adjoint() * initial_;
  current_ = initial_;
}

const MatrixXcd& Trajectory::at(double t) {
  if (t < now_) throw ValidationError("Trajectory: time must not decrease");
  if (t == now_) return current_;
  if (prop_->dense_) {
    const VectorXcd phases = (-cplx(0, 1) * t * prop_->eigenvalues_.cast<cplx>()).array().exp();
    current_ = prop_->eigenvectors_ * (phases.asDiagonal() * coeffs_);
  } else {
    for (Index c = 0; c < current_.cols(); ++c)
      current_.col(c) = krylov_expm(prop_->matrix_, current_.col(c), t - now_, prop_->opts_);
  }
  now_ = t;
  return current_;
}

VectorXcd evolve(const HamiltonianMatrix& h, const VectorXcd& v, double t, const SolverOptions& opts) {
  return Propagator(h, opts).evolve(v, t);
}

}  // namespace tq
