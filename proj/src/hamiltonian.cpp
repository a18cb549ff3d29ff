#include <vector>

#include "thetaquench/errors.hpp"
#include "thetaquench/lattice.hpp"

namespace tq {

HamiltonianMatrix build_hamiltonian(const LatticeParams& p, const FockBasis& sector, int mass_sign) {
  p.validate();
  if (sector.sites() != p.sites) throw ValidationError("build_hamiltonian: basis/lattice size mismatch");
  if (mass_sign != 1 && mass_sign != -1) throw ValidationError("build_hamiltonian: mass_sign must be +-1");

  const int n_sites = p.sites;
  const cplx hop(0, 1.0 / (2.0 * p.spacing));  // i/2a
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(static_cast<std::size_t>(sector.dim()) * (2 * n_sites + 1));

  for (Index i = 0; i < sector.dim(); ++i) {
    const Word w = sector.state(i);
    const VectorXd field = electric_field(w, p);
    double diag = 0.5 * p.spacing * field.squaredNorm();
    for (int n = 0; n < n_sites; ++n)
      if (occupied(w, n)) diag += mass_sign * p.mass * (n % 2 == 0 ? 1.0 : -1.0);
    triplets.emplace_back(i, i, diag);

    // -(i/2a) c+_n c_{n+1} + (i/2a) c+_{n+1} c_n, including the wrap n = N-1 -> 0.
    for (int n = 0; n < n_sites; ++n) {
      const int right = (n + 1) % n_sites;
      const struct {
        int to, from;
        cplx coef;
      } terms[2] = {{n, right, -hop}, {right, n, hop}};
      for (const auto& term : terms) {
        if (!occupied(w, term.from) || occupied(w, term.to)) continue;
        const Word w2 = (w ^ (Word(1) << term.from)) | (Word(1) << term.to);
        const Index j = sector.find(w2);
        triplets.emplace_back(j, i, static_cast<double>(hopping_sign(w, term.from, term.to)) * term.coef);
      }
    }
  }

  HamiltonianMatrix h;
  h.matrix.resize(sector.dim(), sector.dim());
  h.matrix.setFromTriplets(triplets.begin(), triplets.end());
  h.matrix.makeCompressed();
  h.params = p;
  h.mass_sign = mass_sign;
  h.charge = sector.charge();
  return h;
}

}  // namespace tq
