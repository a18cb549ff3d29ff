#include <bit>
#include <string>

#include "thetaquench/errors.hpp"
#include "thetaquench/lattice.hpp"

namespace tq {

void LatticeParams::validate() const {
  if (sites < 4 || sites % 2 != 0)
    throw ValidationError("lattice: N must be even and >= 4 (got " + std::to_string(sites) + ")");
  if (sites > 24) throw ValidationError("lattice: N > 24 is not supported");
  if (!(spacing > 0) || !(mass > 0)) throw ValidationError("lattice: a and m must be > 0");
  if (!(coupling >= 0)) throw ValidationError("lattice: e must be >= 0");
}

FockBasis::FockBasis(int sites, int charge, std::vector<Word> states)
    : sites_(sites), charge_(charge), states_(std::move(states)) {
  if (states_.empty())
    throw ValidationError("FockBasis: empty sector (N=" + std::to_string(sites) +
                          ", Q=" + std::to_string(charge) + ")");
  index_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const Word w = states_[i];
    int q = 0;
    for (int n = 0; n < sites_; ++n) q += site_charge(w, n);
    if (q != charge_ || (w >> sites_) != 0)
      throw ValidationError("FockBasis: word outside the charge sector");
    if (!index_.emplace(w, static_cast<Index>(i)).second)
      throw ValidationError("FockBasis: duplicate word");
  }
}

FockBasis build_basis(int sites, int charge) {
  if (sites < 2 || sites % 2 != 0 || sites > 30)
    throw ValidationError("build_basis: N must be even");
  const int particles = sites / 2 + charge;
  std::vector<Word> states;
  if (particles >= 0 && particles <= sites) {
    const Word end = Word(1) << sites;
    for (Word w = 0; w < end; ++w)
      if (std::popcount(w) == particles) states.push_back(w);
  }
  return FockBasis(sites, charge, std::move(states));
}

VectorXd electric_field(Word w, const LatticeParams& p) {
  const int n_sites = p.sites;
  VectorXd cumulative(n_sites);
  int running = 0;
  for (int n = 0; n < n_sites; ++n) {
    running += site_charge(w, n);
    cumulative(n) = running;
  }
  return p.coupling * (cumulative.array() - cumulative.mean()).matrix();
}

int hopping_sign(Word w, int from, int to) {
  const int lo = std::min(from, to);
  const int hi = std::max(from, to);
  const Word between = w & ((Word(1) << hi) - 1) & ~((Word(1) << (lo + 1)) - 1);
  return std::popcount(between) % 2 == 0 ? 1 : -1;
}

VectorXcd apply_annihilator(const FockBasis& from, const FockBasis& to, int site, const VectorXcd& v) {
  if (to.charge() != from.charge() - 1)
    throw ValidationError("apply_annihilator: target sector must have charge one lower");
  VectorXcd out = VectorXcd::Zero(to.dim());
  for (Index i = 0; i < from.dim(); ++i) {
    const Word w = from.state(i);
    if (!occupied(w, site)) continue;
    const int below = std::popcount(w & ((Word(1) << site) - 1));
    const Index j = to.find(w ^ (Word(1) << site));
    out(j) += (below % 2 == 0 ? 1.0 : -1.0) * v(i);
  }
  return out;
}

MatrixXcd one_body_density(const FockBasis& basis, const VectorXcd& v) {
  const int n_sites = basis.sites();
  MatrixXcd rho = MatrixXcd::Zero(n_sites, n_sites);
  for (Index i = 0; i < basis.dim(); ++i) {
    const Word w = basis.state(i);
    const cplx amp = v(i);
    if (amp == cplx(0)) continue;
    for (int n = 0; n < n_sites; ++n) {
      if (!occupied(w, n)) continue;
      rho(n, n) += std::norm(amp);
      // <v| c+_m c_n |w>: move the particle from n to m.
      for (int m = 0; m < n_sites; ++m) {
        if (m == n || occupied(w, m)) continue;
        const Word w2 = (w ^ (Word(1) << n)) | (Word(1) << m);
        const Index j = basis.find(w2);
        rho(n, m) += std::conj(v(j)) * static_cast<double>(hopping_sign(w, n, m)) * amp;
      }
    }
  }
  return rho;
}

}  // namespace tq
