#pragma once

// Position-graded weak Weyl pairs on a finite window. The Hilbert space is the direct sum of
// fibers H_y (y in the window); U_theta acts on H_y as exp(i theta.y) and every isometry
// generator V_{e_i} should carry H_y into H_{y+e_i}.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "weylpair/lattice.hpp"
#include "weylpair/linalg.hpp"
#include "weylpair/types.hpp"

namespace weylpair {

/// A character of the dual torus T^d, chi(a) = exp(i theta.a).
using Angles = std::vector<double>;

inline double dot(const Angles& theta, const Point& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += theta[i] * y[i];
  return s;
}

inline Complex character(const Angles& theta, const Point& a) { return std::polar(1.0, dot(theta, a)); }

/// Finite dual grid {2 pi j / N_i : j in Z_{N_i}} with N_i the window side on axis i.
inline std::vector<Angles> dual_grid(const LatticeWindow& window) {
  std::vector<Angles> out{Angles{}};
  for (int i = 0; i < window.dim(); ++i) {
    std::vector<Angles> next;
    const int n = window.side(i);
    for (const auto& prefix : out)
      for (int j = 0; j < n; ++j) {
        Angles t = prefix;
        t.push_back(2.0 * std::numbers::pi * j / n);
        next.push_back(std::move(t));
      }
    out = std::move(next);
  }
  return out;
}

class WeylPair {
 public:
  WeylPair() = default;

  /// `fibers` lists k_y for every window point in lexicographic order; `generators[i]` is
  /// V_{e_i}. Dimensions are validated here; grading and isometry are checked separately.
  WeylPair(LatticeWindow window, std::vector<int> fibers, std::vector<SparseMatrix> generators,
           std::string label = {})
      : window_(std::move(window)),
        fibers_(std::move(fibers)),
        generators_(std::move(generators)),
        label_(std::move(label)) {
    if (fibers_.size() != window_.cardinality())
      throw Error(ErrorCode::InvalidArgument, "fiber list must cover every window point");
    if (static_cast<int>(generators_.size()) != window_.dim())
      throw Error(ErrorCode::InvalidArgument, "need one isometry generator per axis");
    offsets_.resize(fibers_.size() + 1, 0);
    for (std::size_t i = 0; i < fibers_.size(); ++i) {
      if (fibers_[i] < 0) throw Error(ErrorCode::InvalidArgument, "negative fiber dimension");
      offsets_[i + 1] = offsets_[i] + fibers_[i];
    }
    position_.resize(static_cast<std::size_t>(dim()));
    for (std::size_t i = 0; i < fibers_.size(); ++i)
      for (int c = offsets_[i]; c < offsets_[i + 1]; ++c) position_[static_cast<std::size_t>(c)] = i;
    for (const auto& g : generators_)
      if (g.rows() != dim() || g.cols() != dim())
        throw Error(ErrorCode::InvalidArgument, "generator dimension differs from sum of fibers");
  }

  const LatticeWindow& window() const { return window_; }
  const std::vector<int>& fibers() const { return fibers_; }
  const std::vector<SparseMatrix>& generators() const { return generators_; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  /// dim H = sum of fibers.
  int dim() const { return offsets_.empty() ? 0 : offsets_.back(); }
  int spatial_dim() const { return window_.dim(); }

  int fiber(const Point& y) const { return window_.contains(y) ? fibers_[window_.index_of(y)] : 0; }
  int fiber_at(std::size_t idx) const { return fibers_[idx]; }
  int offset_at(std::size_t idx) const { return offsets_[idx]; }

  /// Window index of the position carrying coordinate c.
  std::size_t position_of(Eigen::Index c) const { return position_[static_cast<std::size_t>(c)]; }

 private:
  LatticeWindow window_;
  std::vector<int> fibers_;
  std::vector<SparseMatrix> generators_;
  std::string label_;
  std::vector<int> offsets_;
  std::vector<std::size_t> position_;
};

/// Points y with y + [0, margin]^d inside the window.
struct SafeRegion {
  int margin = 0;

  bool is_safe(const LatticeWindow& w, const Point& y) const {
    for (int i = 0; i < w.dim(); ++i)
      if (y[i] + margin > w.hi()[i] || y[i] < w.lo()[i]) return false;
    return true;
  }

  void validate(const LatticeWindow& w) const {
    if (margin < 0) throw Error(ErrorCode::InvalidArgument, "negative safe margin");
    for (int i = 0; i < w.dim(); ++i)
      if (margin > w.side(i)) throw Error(ErrorCode::InvalidArgument, "safe margin exceeds window side");
  }

  /// Coordinates of H lying in safe blocks.
  std::vector<Eigen::Index> coordinates(const WeylPair& pair) const {
    validate(pair.window());
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < pair.window().cardinality(); ++i)
      if (is_safe(pair.window(), pair.window().point_at(i)))
        for (int c = pair.offset_at(i); c < pair.offset_at(i + 1); ++c) out.push_back(c);
    return out;
  }
};

inline SparseMatrix sparse_identity(Eigen::Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

/// Diagonal projection onto the given coordinates.
inline Matrix coordinate_projection(Eigen::Index n, const std::vector<Eigen::Index>& coords) {
  Matrix p = Matrix::Zero(n, n);
  for (auto c : coords) p(c, c) = 1.0;
  return p;
}

/// Coordinate projection P_y onto the fiber block of y.
inline Matrix position_projection(const WeylPair& pair, const Point& y) {
  Matrix p = Matrix::Zero(pair.dim(), pair.dim());
  if (!pair.window().contains(y)) return p;
  const auto idx = pair.window().index_of(y);
  for (int c = pair.offset_at(idx); c < pair.offset_at(idx + 1); ++c) p(c, c) = 1.0;
  return p;
}

/// Canonical pair (U^{(A,k)}, V^{(A,k)}): fiber C^k on A, V_{e_i} the block shift y -> y + e_i.
inline WeylPair build_pspace_pair(const PSet& a, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "multiplicity must be positive");
  if (a.kind() != SetKind::PSpace) throw Error(ErrorCode::InvalidArgument, "expected a P-space");
  const auto& w = a.window();
  std::vector<int> fibers(w.cardinality(), 0);
  for (const auto& p : a.points()) fibers[w.index_of(p)] = k;
  std::vector<int> offsets(fibers.size() + 1, 0);
  for (std::size_t i = 0; i < fibers.size(); ++i) offsets[i + 1] = offsets[i] + fibers[i];
  const Eigen::Index n = offsets.back();

  std::vector<SparseMatrix> gens;
  for (int axis = 0; axis < w.dim(); ++axis) {
    std::vector<Eigen::Triplet<Complex>> trips;
    for (const auto& y : a.points()) {
      Point z = y;
      ++z[axis];
      if (!a.contains(z)) continue;
      const int from = offsets[w.index_of(y)];
      const int to = offsets[w.index_of(z)];
      for (int l = 0; l < k; ++l) trips.emplace_back(to + l, from + l, 1.0);
    }
    SparseMatrix g(n, n);
    g.setFromTriplets(trips.begin(), trips.end());
    gens.push_back(std::move(g));
  }
  std::string label = "(A,k=" + std::to_string(k) + ") A=" + std::to_string(a.size()) + " points";
  return WeylPair(w, std::move(fibers), std::move(gens), std::move(label));
}

/// Diagonal of U_theta.
inline Vector phase_diagonal(const WeylPair& pair, const Angles& theta) {
  Vector d(pair.dim());
  const auto& w = pair.window();
  for (std::size_t i = 0; i < w.cardinality(); ++i) {
    if (pair.fiber_at(i) == 0) continue;
    const Complex ph = character(theta, w.point_at(i));
    for (int c = pair.offset_at(i); c < pair.offset_at(i + 1); ++c) d(c) = ph;
  }
  return d;
}

inline Matrix unitary_U(const WeylPair& pair, const Angles& theta) {
  return phase_diagonal(pair, theta).asDiagonal();
}

/// Recovers P_y from U samples on the full dual grid by finite Fourier inversion,
/// P_y = |Theta|^{-1} sum_theta exp(-i theta.y) U_theta.
inline std::vector<Matrix> positions_from_U_samples(const LatticeWindow& window,
                                                    const std::vector<Angles>& thetas,
                                                    const std::vector<Matrix>& samples) {
  if (thetas.size() != samples.size() || samples.empty())
    throw Error(ErrorCode::InvalidArgument, "need one U sample per dual-grid angle");
  const auto n = samples.front().rows();
  std::vector<Matrix> out;
  for (const auto& y : window.points()) {
    Matrix p = Matrix::Zero(n, n);
    for (std::size_t t = 0; t < thetas.size(); ++t) p += std::conj(character(thetas[t], y)) * samples[t];
    out.push_back(p / static_cast<double>(thetas.size()));
  }
  return out;
}

namespace detail {

inline SparseMatrix compose(const WeylPair& pair, const Point& a, bool forward) {
  SparseMatrix m = sparse_identity(pair.dim());
  const int d = pair.spatial_dim();
  for (int step = 0; step < d; ++step) {
    const int axis = forward ? step : d - 1 - step;
    for (int r = 0; r < a[axis]; ++r) m = (pair.generators()[axis] * m).pruned();
  }
  return m;
}

}  // namespace detail

/// V_a as a sparse matrix: the composition of generator powers, checked for order independence.
inline SparseMatrix isometry_V_sparse(const WeylPair& pair, const Point& a) {
  if (static_cast<int>(a.size()) != pair.spatial_dim() || !nonnegative(a))
    throw Error(ErrorCode::InvalidArgument, "V_a needs a in N^d");
  SparseMatrix fwd = detail::compose(pair, a, true);
  if (pair.spatial_dim() > 1) {
    const SparseMatrix rev = detail::compose(pair, a, false);
    const SparseMatrix diff = fwd - rev;
    if (diff.norm() > tol::kStructural && linalg::operator_norm(diff) > tol::kStructural)
      throw Error(ErrorCode::NonCommutingGenerators,
                  "generator compositions for a=" + format_point(a) + " disagree");
  }
  return fwd;
}

inline Matrix isometry_V(const WeylPair& pair, const Point& a) { return Matrix(isometry_V_sparse(pair, a)); }

inline SparseMatrix range_projection_sparse(const WeylPair& pair, const Point& a) {
  const SparseMatrix v = isometry_V_sparse(pair, a);
  return (v * SparseMatrix(v.adjoint())).pruned();
}

/// E_a = V_a V_a*.
inline Matrix range_projection(const WeylPair& pair, const Point& a) {
  return Matrix(range_projection_sparse(pair, a));
}

/// Operator norm that exploits position-block-diagonal structure when present.
inline double graded_operator_norm(const WeylPair& pair, const SparseMatrix& m) {
  bool block_diagonal = true;
  for (int k = 0; k < m.outerSize() && block_diagonal; ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (pair.position_of(it.row()) != pair.position_of(it.col())) {
        block_diagonal = false;
        break;
      }
  if (!block_diagonal) return linalg::operator_norm(Matrix(m));
  const Matrix dense(m);
  double best = 0.0;
  for (std::size_t i = 0; i < pair.window().cardinality(); ++i) {
    const int k = pair.fiber_at(i);
    if (k == 0) continue;
    const int o = pair.offset_at(i);
    best = std::max(best, linalg::operator_norm(Matrix(dense.block(o, o, k, k))));
  }
  return best;
}

/// max over probe pairs of ||E_a E_b - E_b E_a||.
inline double check_commuting_ranges(const WeylPair& pair, const std::vector<Point>& probe) {
  std::vector<SparseMatrix> e;
  for (const auto& a : probe) e.push_back(range_projection_sparse(pair, a));
  double worst = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      const SparseMatrix c = (e[i] * e[j] - e[j] * e[i]).pruned(1.0, 1e-300);
      if (c.nonZeros() == 0) continue;
      worst = std::max(worst, graded_operator_norm(pair, c));
    }
  return worst;
}

/// Probe set {a : 0 <= a <= bound}^d.
inline std::vector<Point> probe_box(int dim, int bound) {
  return box_points(Point(static_cast<std::size_t>(dim), 0), Point(static_cast<std::size_t>(dim), bound));
}

/// Evaluates ||(U_theta V_a - chi(a) V_a U_theta) restricted to the safe subspace|| for many
/// angles at fixed a. The sparsity pattern of V_a is computed once.
class WeylDefectKernel {
 public:
  WeylDefectKernel(const WeylPair& pair, const Point& a, const SafeRegion& safe) : pair_(&pair), a_(a) {
    for (int v : a)
      if (v < 0 || v > safe.margin)
        throw Error(ErrorCode::MarginTooSmall,
                    "a=" + format_point(a) + " exceeds safe margin " + std::to_string(safe.margin));
    const SparseMatrix va = isometry_V_sparse(pair, a);
    const auto cols = safe.coordinates(pair);
    std::vector<Eigen::Index> col_slot(static_cast<std::size_t>(pair.dim()), -1);
    for (std::size_t j = 0; j < cols.size(); ++j) col_slot[static_cast<std::size_t>(cols[j])] = static_cast<Eigen::Index>(j);
    safe_cols_ = static_cast<Eigen::Index>(cols.size());
    std::vector<int> row_count(static_cast<std::size_t>(pair.dim()), 0);
    std::vector<int> col_count(cols.size(), 0);
    for (int k = 0; k < va.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(va, k); it; ++it) {
        const Eigen::Index slot = col_slot[static_cast<std::size_t>(it.col())];
        if (slot < 0 || it.value() == Complex(0.0)) continue;
        rows_.push_back(it.row());
        cols_.push_back(it.col());
        slots_.push_back(slot);
        vals_.push_back(it.value());
        ++row_count[static_cast<std::size_t>(it.row())];
        ++col_count[static_cast<std::size_t>(slot)];
      }
    monomial_ = std::all_of(row_count.begin(), row_count.end(), [](int c) { return c <= 1; }) &&
                std::all_of(col_count.begin(), col_count.end(), [](int c) { return c <= 1; });
    if (!monomial_) group_blocks();
  }

  /// Defect for a U diagonal given position phases.
  double evaluate(const Vector& phases, const Complex& chi_a) const {
    if (monomial_) {
      // A matrix with at most one nonzero per row and column has these entries' moduli as
      // its singular values.
      double best = 0.0;
      for (std::size_t e = 0; e < vals_.size(); ++e) {
        const Complex v = vals_[e] * (phases(rows_[e]) - chi_a * phases(cols_[e]));
        best = std::max(best, std::norm(v));
      }
      return std::sqrt(best);
    }
    if (block_monomial_) {
      // Position blocks with at most one nonzero block per block row and column: the norm is
      // the largest block norm.
      double best = 0.0;
      for (const auto& blk : blocks_) {
        Matrix m = Matrix::Zero(blk.rows, blk.cols);
        for (std::size_t e : blk.entries)
          m(rows_[e] - blk.row0, cols_[e] - blk.col0) = vals_[e] * (phases(rows_[e]) - chi_a * phases(cols_[e]));
        best = std::max(best, linalg::operator_norm(m));
      }
      return best;
    }
    Matrix m = Matrix::Zero(pair_->dim(), safe_cols_);
    for (std::size_t e = 0; e < vals_.size(); ++e)
      m(rows_[e], slots_[e]) += vals_[e] * (phases(rows_[e]) - chi_a * phases(cols_[e]));
    return linalg::operator_norm(m);
  }

  double evaluate(const Angles& theta) const {
    return evaluate(phase_diagonal(*pair_, theta), character(theta, a_));
  }

  bool monomial() const { return monomial_; }

 private:
  struct Block {
    Eigen::Index row0, col0, rows, cols;
    std::vector<std::size_t> entries;
  };

  void group_blocks() {
    std::map<std::pair<std::size_t, std::size_t>, Block> by_pos;
    std::map<std::size_t, std::size_t> row_partner, col_partner;
    block_monomial_ = true;
    for (std::size_t e = 0; e < vals_.size(); ++e) {
      const std::size_t rp = pair_->position_of(rows_[e]);
      const std::size_t cp = pair_->position_of(cols_[e]);
      if (auto [it, fresh] = row_partner.emplace(rp, cp); !fresh && it->second != cp) block_monomial_ = false;
      if (auto [it, fresh] = col_partner.emplace(cp, rp); !fresh && it->second != rp) block_monomial_ = false;
      auto [it, fresh] = by_pos.try_emplace({rp, cp});
      if (fresh)
        it->second = Block{pair_->offset_at(rp), pair_->offset_at(cp), pair_->fiber_at(rp), pair_->fiber_at(cp), {}};
      it->second.entries.push_back(e);
    }
    if (!block_monomial_) return;
    for (auto& [key, blk] : by_pos) blocks_.push_back(std::move(blk));
  }

  const WeylPair* pair_;
  Point a_;
  Eigen::Index safe_cols_ = 0;
  std::vector<Eigen::Index> rows_, cols_, slots_;
  std::vector<Complex> vals_;
  bool monomial_ = true;
  bool block_monomial_ = false;
  std::vector<Block> blocks_;
};

inline double weyl_defect(const WeylPair& pair, const Angles& theta, const Point& a, const SafeRegion& safe) {
  return WeylDefectKernel(pair, a, safe).evaluate(theta);
}

/// Largest Weyl defect over every (theta, a) combination.
inline double max_weyl_defect(const WeylPair& pair, const std::vector<Angles>& thetas,
                              const std::vector<Point>& as, const SafeRegion& safe) {
  std::vector<Vector> phases;
  phases.reserve(thetas.size());
  for (const auto& t : thetas) phases.push_back(phase_diagonal(pair, t));
  double worst = 0.0;
  for (const auto& a : as) {
    const WeylDefectKernel kernel(pair, a, safe);
    for (std::size_t t = 0; t < thetas.size(); ++t)
      worst = std::max(worst, kernel.evaluate(phases[t], character(thetas[t], a)));
  }
  return worst;
}

/// ||(V_a* V_a - I) restricted to the safe subspace||.
inline double isometry_defect(const WeylPair& pair, const Point& a, const SafeRegion& safe) {
  const auto cols = safe.coordinates(pair);
  const Matrix va = isometry_V(pair, a);
  Matrix sub(va.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = va.col(cols[j]);
  const Matrix gram = sub.adjoint() * sub - Matrix::Identity(sub.cols(), sub.cols());
  return linalg::operator_norm(gram);
}

/// Norm of the part of each V_{e_i} that does not map the block of y into the block of y + e_i.
inline double graded_shift_defect(const WeylPair& pair) {
  double worst = 0.0;
  const auto& w = pair.window();
  for (int axis = 0; axis < pair.spatial_dim(); ++axis) {
    const SparseMatrix& g = pair.generators()[axis];
    double off = 0.0;
    for (int k = 0; k < g.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(g, k); it; ++it) {
        Point target = w.point_at(pair.position_of(it.col()));
        ++target[axis];
        const bool ok = w.contains(target) && w.index_of(target) == pair.position_of(it.row());
        if (!ok) off += std::norm(it.value());
      }
    worst = std::max(worst, std::sqrt(off));
  }
  return worst;
}

/// Block-wise direct sum; the fiber of y in the sum stacks the summands' fibers in order.
inline WeylPair direct_sum(const std::vector<WeylPair>& pairs) {
  if (pairs.empty()) throw Error(ErrorCode::InvalidArgument, "direct sum of nothing");
  if (pairs.size() == 1) return pairs.front();
  const auto& w = pairs.front().window();
  for (const auto& p : pairs)
    if (!(p.window() == w)) throw Error(ErrorCode::WindowMismatch, "direct sum needs a common window");
  const std::size_t npts = w.cardinality();
  std::vector<int> fibers(npts, 0);
  for (const auto& p : pairs)
    for (std::size_t i = 0; i < npts; ++i) fibers[i] += p.fiber_at(i);
  std::vector<int> offsets(npts + 1, 0);
  for (std::size_t i = 0; i < npts; ++i) offsets[i + 1] = offsets[i] + fibers[i];

  // new coordinate of (summand s, old coordinate c)
  std::vector<std::vector<int>> remap(pairs.size());
  std::vector<int> fill(npts, 0);
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    const auto& p = pairs[s];
    remap[s].resize(static_cast<std::size_t>(p.dim()));
    for (std::size_t i = 0; i < npts; ++i) {
      for (int l = 0; l < p.fiber_at(i); ++l)
        remap[s][static_cast<std::size_t>(p.offset_at(i) + l)] = offsets[i] + fill[i] + l;
      fill[i] += p.fiber_at(i);
    }
  }
  const Eigen::Index n = offsets.back();
  std::vector<SparseMatrix> gens;
  for (int axis = 0; axis < w.dim(); ++axis) {
    std::vector<Eigen::Triplet<Complex>> trips;
    for (std::size_t s = 0; s < pairs.size(); ++s) {
      const SparseMatrix& g = pairs[s].generators()[axis];
      for (int k = 0; k < g.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(g, k); it; ++it)
          trips.emplace_back(remap[s][static_cast<std::size_t>(it.row())],
                             remap[s][static_cast<std::size_t>(it.col())], it.value());
    }
    SparseMatrix g(n, n);
    g.setFromTriplets(trips.begin(), trips.end());
    gens.push_back(std::move(g));
  }
  std::string label;
  for (std::size_t s = 0; s < pairs.size(); ++s) label += (s ? " + " : "") + pairs[s].label();
  return WeylPair(w, std::move(fibers), std::move(gens), std::move(label));
}

/// Compresses a pair onto the positions of a sub-window.
inline WeylPair restrict_to_window(const WeylPair& pair, const LatticeWindow& sub) {
  const auto& w = pair.window();
  for (const auto& corner : {sub.lo(), sub.hi()})
    if (!w.contains(corner)) throw Error(ErrorCode::WindowMismatch, "sub-window not inside window");
  std::vector<int> fibers(sub.cardinality(), 0);
  std::vector<int> remap(static_cast<std::size_t>(pair.dim()), -1);
  int next = 0;
  for (std::size_t j = 0; j < sub.cardinality(); ++j) {
    const auto i = w.index_of(sub.point_at(j));
    fibers[j] = pair.fiber_at(i);
    for (int l = 0; l < fibers[j]; ++l) remap[static_cast<std::size_t>(pair.offset_at(i) + l)] = next++;
  }
  std::vector<SparseMatrix> gens;
  for (const auto& g : pair.generators()) {
    std::vector<Eigen::Triplet<Complex>> trips;
    for (int k = 0; k < g.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(g, k); it; ++it) {
        const int r = remap[static_cast<std::size_t>(it.row())];
        const int c = remap[static_cast<std::size_t>(it.col())];
        if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
      }
    SparseMatrix s(next, next);
    s.setFromTriplets(trips.begin(), trips.end());
    gens.push_back(std::move(s));
  }
  return WeylPair(sub, std::move(fibers), std::move(gens), pair.label());
}

/// Conjugates every generator by a block-diagonal unitary (one Haar unitary per fiber),
/// which preserves the position grading and the unitary equivalence class.
inline WeylPair conjugate_fibers(const WeylPair& pair, std::mt19937_64& rng) {
  Matrix u = Matrix::Zero(pair.dim(), pair.dim());
  for (std::size_t i = 0; i < pair.window().cardinality(); ++i) {
    const int k = pair.fiber_at(i);
    if (k == 0) continue;
    u.block(pair.offset_at(i), pair.offset_at(i), k, k) = linalg::random_unitary(k, rng);
  }
  std::vector<SparseMatrix> gens;
  for (const auto& g : pair.generators()) {
    const Matrix c = u * Matrix(g) * u.adjoint();
    gens.push_back(c.sparseView(1.0, 1e-14));
  }
  return WeylPair(pair.window(), pair.fibers(), std::move(gens), pair.label());
}

}  // namespace weylpair
