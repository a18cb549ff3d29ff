#pragma once

// Integer winding of a sampled complex field around closed lattice paths in
// the (k, t) plane. Link phases are taken on the principal branch, so the sum
// around any closed loop is an exact multiple of 2 pi whatever the grid
// spacing; the loop integer equals the total charge of the plaquettes it
// encloses.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "thetaquench/errors.hpp"
#include "thetaquench/types.hpp"

namespace tq {

/// Amplitudes below this magnitude have no usable phase.
inline constexpr double kSingularAmplitude = 1e-14;

/// Complex amplitudes and their phases on a rectangular (k, t) grid.
/// Arrays are indexed (t_index, k_index).
template <typename Scalar = double> class PhaseField {
 public:
  PhaseField() = default;

  PhaseField(VectorX<Scalar> k_grid, VectorX<Scalar> t_grid, ArrayXXc<Scalar> amp,
             Scalar singular_threshold = static_cast<Scalar>(kSingularAmplitude))
      : k_grid_(std::move(k_grid)), t_grid_(std::move(t_grid)), amp_(std::move(amp)) {
    if (amp_.rows() != t_grid_.size() || amp_.cols() != k_grid_.size())
      throw ValidationError("PhaseField: amplitude shape does not match the grids");
    check_increasing(k_grid_, "k_grid");
    check_increasing(t_grid_, "t_grid");
    phase_.resize(amp_.rows(), amp_.cols());
    singular_.resize(amp_.rows(), amp_.cols());
    for (Index i = 0; i < amp_.rows(); ++i) {
      for (Index j = 0; j < amp_.cols(); ++j) {
        const bool s = std::abs(amp_(i, j)) < singular_threshold;
        singular_(i, j) = s;
        phase_(i, j) = s ? std::numeric_limits<Scalar>::quiet_NaN() : principal_arg(amp_(i, j));
      }
    }
  }

  const VectorX<Scalar>& k_grid() const { return k_grid_; }
  const VectorX<Scalar>& t_grid() const { return t_grid_; }
  const ArrayXXc<Scalar>& amp() const { return amp_; }
  const ArrayXX<Scalar>& phase() const { return phase_; }
  const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& singular() const { return singular_; }

  Index t_size() const { return t_grid_.size(); }
  Index k_size() const { return k_grid_.size(); }

  /// Column holding k = 0 exactly; throws if the grid has none.
  Index zero_column() const {
    for (Index j = 0; j < k_grid_.size(); ++j)
      if (k_grid_(j) == 0) return j;
    throw ValidationError("PhaseField: k_grid must contain k = 0");
  }

  static Scalar principal_arg(Complex<Scalar> z) {
    Scalar a = std::arg(z);
    if (a <= -pi_v<Scalar>) a += 2 * pi_v<Scalar>;
    return a;
  }

 private:
  static void check_increasing(const VectorX<Scalar>& g, const char* name) {
    if (g.size() == 0) throw ValidationError(std::string("PhaseField: empty ") + name);
    for (Index i = 1; i < g.size(); ++i)
      if (!(g(i) > g(i - 1)))
        throw ValidationError(std::string("PhaseField: ") + name + " must be strictly increasing");
  }

  VectorX<Scalar> k_grid_, t_grid_;
  ArrayXXc<Scalar> amp_;
  ArrayXX<Scalar> phase_;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> singular_;
};

/// (phi_b - phi_a) wrapped into (-pi, pi].
template <typename Scalar> Scalar principal_diff(Scalar phi_a, Scalar phi_b) {
  return wrap_angle(phi_b - phi_a);
}

/// True when a link jump equals pi within 1e-12, i.e. its direction of
/// rotation is undefined.
template <typename Scalar> bool is_pi_jump(Scalar d) {
  return std::abs(std::abs(static_cast<double>(d)) - std::numbers::pi) < 1e-12;
}

struct GridShifts {
  std::vector<Index> rows;
  std::vector<Index> columns;
};

/// Samples amp(k, t) on the grid, stepping around exact zeros so contours laid
/// on the nodes stay defined. A time row (other than t = 0) holding a zero node
/// or a pi link moves forward by half a step; a k column (other than k = 0)
/// holding a pi link moves half a step away from k = 0. Zeros are isolated, so
/// one move suffices generically.
template <typename Scalar, typename F>
PhaseField<Scalar> sample_phase_field(VectorX<Scalar> k_grid, VectorX<Scalar> t_grid, F&& amp,
                                      GridShifts* shifts = nullptr,
                                      Scalar threshold = static_cast<Scalar>(kSingularAmplitude)) {
  const Index nt = t_grid.size();
  const Index nk = k_grid.size();
  ArrayXXc<Scalar> values(nt, nk);
  auto jump = [&](Index i0, Index j0, Index i1, Index j1) {
    return is_pi_jump(principal_diff(std::arg(values(i0, j0)), std::arg(values(i1, j1))));
  };
  auto fill_row = [&](Index i) {
    for (Index j = 0; j < nk; ++j) values(i, j) = amp(k_grid(j), t_grid(i));
  };
  auto fill_column = [&](Index j) {
    for (Index i = 0; i < nt; ++i) values(i, j) = amp(k_grid(j), t_grid(i));
  };
  for (Index i = 0; i < nt; ++i) fill_row(i);

  for (Index j = 0; j < nk; ++j) {
    if (k_grid(j) == 0) continue;
    bool hit = false;
    for (Index i = 0; i + 1 < nt && !hit; ++i) hit = jump(i, j, i + 1, j);
    if (!hit) continue;
    if (k_grid(j) > 0)
      k_grid(j) += (j + 1 < nk ? k_grid(j + 1) - k_grid(j) : k_grid(j) - k_grid(j - 1)) / 2;
    else
      k_grid(j) -= (j > 0 ? k_grid(j) - k_grid(j - 1) : k_grid(j + 1) - k_grid(j)) / 2;
    fill_column(j);
    if (shifts) shifts->columns.push_back(j);
  }

  for (Index i = 1; i < nt; ++i) {
    bool hit = false;
    for (Index j = 0; j < nk && !hit; ++j)
      hit = std::abs(values(i, j)) < threshold || (j + 1 < nk && jump(i, j, i, j + 1));
    if (!hit) continue;
    t_grid(i) += (i + 1 < nt ? t_grid(i + 1) - t_grid(i) : t_grid(i) - t_grid(i - 1)) / 2;
    fill_row(i);
    if (shifts) shifts->rows.push_back(i);
  }
  return PhaseField<Scalar>(std::move(k_grid), std::move(t_grid), std::move(values), threshold);
}

struct GridNode {
  Index t;
  Index k;
  bool operator==(const GridNode&) const = default;
};

struct PathWinding {
  int winding = 0;
  double max_jump = 0;     // largest |principal_diff| over the links
  bool ambiguous = false;  // some link jump equals pi within 1e-12
};

/// Winding number of the field phase along a closed path of grid nodes. The
/// path is given without repeating the first node at the end.
template <typename Scalar>
PathWinding path_winding(const PhaseField<Scalar>& field, const std::vector<GridNode>& path) {
  PathWinding out;
  if (path.size() < 2) return out;
  for (const auto& n : path) {
    if (n.t < 0 || n.t >= field.t_size() || n.k < 0 || n.k >= field.k_size())
      throw ValidationError("path_winding: node outside the grid");
    if (field.singular()(n.t, n.k))
      throw SingularNodeError("path_winding: path touches a singular node", n.t, n.k);
  }
  Scalar sum = 0;
  for (std::size_t s = 0; s < path.size(); ++s) {
    const auto& a = path[s];
    const auto& b = path[(s + 1) % path.size()];
    const Scalar d = principal_diff(field.phase()(a.t, a.k), field.phase()(b.t, b.k));
    sum += d;
    out.max_jump = std::max(out.max_jump, static_cast<double>(std::abs(d)));
    if (is_pi_jump(d)) out.ambiguous = true;
  }
  const Scalar turns = sum / (2 * pi_v<Scalar>);
  const Scalar rounded = std::round(turns);
  if (std::abs(turns - rounded) > static_cast<Scalar>(1e-9))
    throw NumericalError("path_winding: non-integer winding (path not closed?)");
  out.winding = static_cast<int>(rounded);
  return out;
}

/// Counter-clockwise boundary of the node rectangle [k0, k1] x [t0, t1] in the
/// (k, t) plane, k horizontal: bottom edge left to right, right edge up, top
/// edge right to left, left edge down.
inline std::vector<GridNode> rectangle_path(Index k0, Index k1, Index t0, Index t1) {
  std::vector<GridNode> p;
  if (k0 == k1 || t0 == t1) {
    // Degenerate rectangle: a segment traversed forth and back.
    for (Index k = k0; k <= k1; ++k)
      for (Index t = t0; t <= t1; ++t) p.push_back({t, k});
    const auto forward = p.size();
    for (auto s = forward - 1; s-- > 1;) p.push_back(p[s]);
    return p;
  }
  for (Index k = k0; k < k1; ++k) p.push_back({t0, k});
  for (Index t = t0; t < t1; ++t) p.push_back({t, k1});
  for (Index k = k1; k > k0; --k) p.push_back({t1, k});
  for (Index t = t1; t > t0; --t) p.push_back({t, k0});
  return p;
}

struct WindingResult {
  int n_plus = 0;
  int n_minus = 0;
  int nu = 0;
  double per_link_max_jump = 0;
  bool reliable = true;  // every link jump strictly below pi
};

/// Dynamical topological order parameter at time row `t_index`: windings
/// around the right (k >= 0) and left (k <= 0) halves of the sampled plane,
/// both counter-clockwise, up to the present time.
template <typename Scalar>
WindingResult nu_invariant(const PhaseField<Scalar>& field, Index t_index) {
  if (t_index < 0 || t_index >= field.t_size())
    throw ValidationError("nu_invariant: t_index outside the grid");
  const Index k0 = field.zero_column();
  const Index k_last = field.k_size() - 1;
  if (k0 == 0 || k0 == k_last)
    throw ValidationError("nu_invariant: the k grid must extend to both sides of k = 0");
  WindingResult r;
  if (t_index == 0) return r;
  const auto plus = path_winding(field, rectangle_path(k0, k_last, 0, t_index));
  const auto minus = path_winding(field, rectangle_path(0, k0, 0, t_index));
  r.n_plus = plus.winding;
  r.n_minus = minus.winding;
  r.nu = r.n_plus - r.n_minus;
  r.per_link_max_jump = std::max(plus.max_jump, minus.max_jump);
  r.reliable = !(plus.ambiguous || minus.ambiguous) && r.per_link_max_jump < std::numbers::pi;
  return r;
}

/// nu_invariant for every time row.
template <typename Scalar> std::vector<WindingResult> nu_series(const PhaseField<Scalar>& field) {
  std::vector<WindingResult> out;
  out.reserve(static_cast<std::size_t>(field.t_size()));
  for (Index i = 0; i < field.t_size(); ++i) out.push_back(nu_invariant(field, i));
  return out;
}

template <typename Scalar = double> struct Vortex {
  Scalar k;  // plaquette centre
  Scalar t;
  int charge;
  Index k_index;  // lower-left node of the plaquette
  Index t_index;
};

/// All plaquettes carrying nonzero winding. A charge of +-2 needs all four
/// links to jump by exactly pi, i.e. the grid does not resolve the phase.
template <typename Scalar>
std::vector<Vortex<Scalar>> vortex_chart(const PhaseField<Scalar>& field) {
  std::vector<Vortex<Scalar>> out;
  const auto& ph = field.phase();
  for (Index i = 0; i + 1 < field.t_size(); ++i) {
    for (Index j = 0; j + 1 < field.k_size(); ++j) {
      const GridNode corners[4] = {{i, j}, {i, j + 1}, {i + 1, j + 1}, {i + 1, j}};
      Scalar sum = 0;
      for (int c = 0; c < 4; ++c) {
        const auto& a = corners[c];
        const auto& b = corners[(c + 1) % 4];
        if (field.singular()(a.t, a.k))
          throw SingularNodeError("vortex_chart: singular node inside the field", a.t, a.k);
        sum += principal_diff(ph(a.t, a.k), ph(b.t, b.k));
      }
      const int q = static_cast<int>(std::lround(sum / (2 * pi_v<Scalar>)));
      if (q == 0) continue;
      if (std::abs(q) > 1)
        throw GridTooCoarseError("vortex_chart: plaquette charge " + std::to_string(q) +
                                 " at t_index " + std::to_string(i) + ", k_index " +
                                 std::to_string(j) + "; refine the grid");
      const auto& kg = field.k_grid();
      const auto& tg = field.t_grid();
      out.push_back({(kg(j) + kg(j + 1)) / 2, (tg(i) + tg(i + 1)) / 2, q, j, i});
    }
  }
  return out;
}

}  // namespace tq
