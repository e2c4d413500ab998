#pragma once

// Depth-r unitary dilation of a position-graded pair with commuting range projections.
//
// Model: K_r = W_s^* H with s = r*1. A vector eta of H stands for W_s^* eta in K_r, so
// K_r has the coordinates of H with every position shifted by -s. In these coordinates
//   embed       = V_s
//   W_a         = V_a                        (a in P)
//   W_x         = V_{x-}^* V_{x+}            (valid on the range of V_{x-})
//   E_x         = V_{x+s} V_{x+s}^*          (projection onto W_x embed(H))
//   extended U  = conj(chi(s)) U_chi
// Every identity is exact on vectors supported at positions y with y + 2s inside the window.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "weylpair/commutant.hpp"
#include "weylpair/lattice.hpp"
#include "weylpair/linalg.hpp"
#include "weylpair/types.hpp"
#include "weylpair/weyl_pair.hpp"

namespace weylpair {

/// Coordinates of blocks at positions y with y + margin*1 inside the window.
inline std::vector<Eigen::Index> coordinates_with_margin(const WeylPair& pair, int margin) {
  std::vector<Eigen::Index> out;
  const auto& w = pair.window();
  for (std::size_t i = 0; i < w.cardinality(); ++i) {
    const Point y = w.point_at(i);
    bool ok = true;
    for (int ax = 0; ax < w.dim(); ++ax) ok = ok && y[ax] + margin <= w.hi()[ax];
    if (!ok) continue;
    for (int c = pair.offset_at(i); c < pair.offset_at(i + 1); ++c) out.push_back(c);
  }
  return out;
}

inline Matrix coordinate_injection(Eigen::Index n, const std::vector<Eigen::Index>& coords) {
  Matrix j = Matrix::Zero(n, static_cast<Eigen::Index>(coords.size()));
  for (std::size_t c = 0; c < coords.size(); ++c) j(coords[c], static_cast<Eigen::Index>(c)) = 1.0;
  return j;
}

inline Point positive_part(const Point& x) {
  Point p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::max(x[i], 0);
  return p;
}

inline Point negative_part(const Point& x) {
  Point p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::max(-x[i], 0);
  return p;
}

class DilationBundle {
 public:
  DilationBundle(WeylPair base, int depth) : base_(std::move(base)), depth_(depth) {
    s_ = Point(static_cast<std::size_t>(base_.spatial_dim()), depth_);
    embed_ = isometry_V(base_, s_);
  }

  const WeylPair& base() const { return base_; }
  int depth() const { return depth_; }
  int budget() const { return depth_; }
  const Point& shift() const { return s_; }
  Eigen::Index dim() const { return base_.dim(); }

  /// Isometry H -> K_r in model coordinates.
  const Matrix& embed() const { return embed_; }

  /// The box [-budget, budget]^d of admissible x.
  LatticeWindow budget_box() const {
    const int d = base_.spatial_dim();
    return LatticeWindow(Point(static_cast<std::size_t>(d), -depth_), Point(static_cast<std::size_t>(d), depth_));
  }

  void require_budget(const Point& x) const {
    if (sup_norm(x) > depth_)
      throw Error(ErrorCode::BudgetExceeded,
                  "x=" + format_point(x) + " beyond dilation budget " + std::to_string(depth_));
  }

  /// W_x in model coordinates.
  Matrix W(const Point& x) const {
    if (nonnegative(x)) return isometry_V(base_, x);
    if (depth_ == 0)
      throw Error(ErrorCode::DepthZeroDegenerate, "W_x for x=" + format_point(x) + " needs positive depth");
    require_budget(x);
    return isometry_V(base_, negative_part(x)).adjoint() * isometry_V(base_, positive_part(x));
  }

  /// E_x, the projection onto W_x embed(H).
  Matrix E(const Point& x) const {
    require_budget(x);
    return range_projection(base_, add(x, s_));
  }

  /// Extended character unitary on K_r.
  Matrix extended_U(const Angles& theta) const {
    return std::conj(character(theta, s_)) * unitary_U(base_, theta);
  }

  /// Positions of the model coordinates in K (H positions shifted by -s).
  LatticeWindow model_window() const {
    Point neg(s_.size());
    for (std::size_t i = 0; i < s_.size(); ++i) neg[i] = -s_[i];
    return base_.window().shifted(neg);
  }

  /// Injection of the coordinates on which the model is exact.
  Matrix exact_domain() const { return coordinate_injection(dim(), coordinates_with_margin(base_, 2 * depth_)); }

 private:
  WeylPair base_;
  int depth_;
  Point s_;
  Matrix embed_;
};

inline DilationBundle minimal_dilation(const WeylPair& pair, int depth) {
  if (depth < 0) throw Error(ErrorCode::InvalidArgument, "negative dilation depth");
  int bound = std::max(1, depth);
  for (int i = 0; i < pair.spatial_dim(); ++i) bound = std::min(bound, pair.window().side(i) - 1);
  const double c = check_commuting_ranges(pair, probe_box(pair.spatial_dim(), std::max(bound, 0)));
  if (c > tol::kStructural)
    throw Error(ErrorCode::NonCommutingRanges, "range projections fail to commute (" + std::to_string(c) + ")");
  return DilationBundle(pair, depth);
}

inline Matrix project_E(const DilationBundle& b, const Point& x) { return b.E(x); }

/// Defects of the dilation axioms and of the three observations on the E-family, measured on
/// the exact domain within budget.
struct DilationReport {
  double embed_isometry = 0.0;
  double group_law = 0.0;        // W_x W_y = W_{x+y}
  double unitarity = 0.0;        // W_x isometric on the range of V_{x-}
  double extension = 0.0;        // W_a embed = embed V_a
  double exhaustion = 0.0;       // span of W_a^* embed(H), a <= s, covers the domain
  double covariance = 0.0;       // W_x E_y W_x^* = E_{x+y}
  double monotonicity = 0.0;     // x <= y gives E_x >= E_y
  double commutation = 0.0;      // [E_x, E_y] = 0
  double idempotency = 0.0;      // E_x is a projection

  double worst() const {
    return std::max({embed_isometry, group_law, unitarity, extension, exhaustion, covariance, monotonicity,
                     commutation, idempotency});
  }
};

inline DilationReport check_dilation(const DilationBundle& b) {
  DilationReport rep;
  const WeylPair& h = b.base();
  const int d = h.spatial_dim();
  const Matrix j = b.exact_domain();
  if (j.cols() == 0) return rep;
  const Point& s = b.shift();
  const auto box = b.budget_box().points();

  auto norm_of = [](const Matrix& m) { return m.size() ? linalg::operator_norm(m) : 0.0; };

  rep.embed_isometry = norm_of(j.adjoint() * b.embed().adjoint() * b.embed() * j - Matrix::Identity(j.cols(), j.cols()));

  std::map<Point, Matrix> w;
  std::map<Point, Matrix> e;
  for (const auto& x : box) {
    if (b.depth() > 0 || nonnegative(x)) w.emplace(x, b.W(x));
    e.emplace(x, b.E(x));
  }

  for (const auto& x : box) {
    if (!w.count(x)) continue;
    const Matrix dom = isometry_V(h, negative_part(x)) * j;
    const Matrix img = w.at(x) * dom;
    rep.unitarity = std::max(rep.unitarity, norm_of(img.adjoint() * img - dom.adjoint() * dom));
  }

  for (const auto& x : box)
    for (const auto& y : box) {
      const Point xy = add(x, y);
      if (sup_norm(xy) > b.budget() || !w.count(x) || !w.count(y) || !w.count(xy)) continue;
      Point t(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i)
        t[i] = std::max({std::max(-y[i], 0), std::max(-x[i], 0) - y[i], std::max(-xy[i], 0), 0});
      const Matrix dom = isometry_V(h, t) * j;
      rep.group_law = std::max(rep.group_law, norm_of(w.at(x) * (w.at(y) * dom) - w.at(xy) * dom));
    }

  for (const auto& a : box) {
    if (!nonnegative(a)) continue;
    const Matrix lhs = b.W(a) * b.embed() * j;
    const Matrix rhs = b.embed() * isometry_V(h, a) * j;
    rep.extension = std::max(rep.extension, norm_of(lhs - rhs));
  }

  {
    std::vector<Matrix> spans;
    for (const auto& a : box_points(Point(static_cast<std::size_t>(d), 0), s)) spans.push_back(b.W(a).adjoint() * b.embed() * j);
    Matrix all(b.dim(), 0);
    for (const auto& m : spans) {
      Matrix next(b.dim(), all.cols() + m.cols());
      next << all, m;
      all = std::move(next);
    }
    const Matrix q = linalg::orthonormal_columns(all);
    rep.exhaustion = norm_of(j - q * (q.adjoint() * j));
  }

  for (const auto& x : box) {
    const Matrix& ex = e.at(x);
    rep.idempotency = std::max(rep.idempotency, linalg::projection_defect(ex));
    for (const auto& y : box) {
      const Matrix& ey = e.at(y);
      rep.commutation = std::max(rep.commutation, norm_of(ex * ey - ey * ex));
      if (leq(x, y)) rep.monotonicity = std::max(rep.monotonicity, -linalg::smallest_eigenvalue(ex - ey));
      const Point xy = add(x, y);
      const Point mx = subtract(Point(static_cast<std::size_t>(d), 0), x);
      if (sup_norm(xy) > b.budget() || !w.count(x) || !w.count(mx)) continue;
      const Matrix dom = isometry_V(h, positive_part(x)) * j;
      const Matrix lhs = w.at(x) * (ey * (w.at(mx) * dom));
      rep.covariance = std::max(rep.covariance, norm_of(lhs - e.at(xy) * dom));
    }
  }
  return rep;
}

/// Extended character unitaries for the sampled angles. Each alternative evaluation route
/// conj(chi(a)) W_a^* U_chi W_a, a in [0, s], is compared with the chosen one on W_a^* H.
inline std::vector<Matrix> extend_U(const DilationBundle& b, const std::vector<Angles>& thetas) {
  const WeylPair& h = b.base();
  const int d = h.spatial_dim();
  std::vector<Point> unit_steps;
  for (int i = 0; i < d; ++i) unit_steps.push_back(unit(d, i));
  int margin = 1;
  for (int i = 0; i < d; ++i) margin = std::min(margin, h.window().side(i));
  const double base_defect = max_weyl_defect(h, thetas, unit_steps, SafeRegion{margin});
  if (base_defect > tol::kStructural)
    throw Error(ErrorCode::CheckFailed, "base pair violates the Weyl relation (" + std::to_string(base_defect) + ")");

  const Matrix j = b.exact_domain();
  struct Route {
    Point a;
    Matrix v, dom;
  };
  std::vector<Route> routes;
  if (j.cols() > 0)
    for (const auto& a : box_points(Point(static_cast<std::size_t>(d), 0), b.shift())) {
      Matrix v = isometry_V(h, subtract(b.shift(), a));
      Matrix dom = v * j;
      routes.push_back({a, std::move(v), std::move(dom)});
    }
  std::vector<Matrix> out;
  for (const auto& theta : thetas) {
    const Vector u = phase_diagonal(h, theta);
    Matrix ext = b.extended_U(theta);
    {
      for (const auto& [a, v, dom] : routes) {
        const Matrix route = std::conj(character(theta, a)) * (v * (u.asDiagonal() * (v.adjoint() * dom)));
        const double gap = linalg::operator_norm(Matrix(route - ext * dom));
        if (gap > tol::kKernel)
          throw Error(ErrorCode::WellDefinednessViolation,
                      "routes through a=" + format_point(a) + " differ by " + std::to_string(gap));
      }
    }
    out.push_back(std::move(ext));
  }
  return out;
}

struct ExtensionReport {
  double c1 = 0.0;           // extended U agrees with U on embed(H)
  double c2 = 0.0;           // extended U W_x = chi(x) W_x extended U
  double group_law = 0.0;    // U~(theta) U~(theta') = U~(theta + theta')
  double commutes_E = 0.0;   // [U~, E_x] = 0
  double unitarity = 0.0;

  double worst() const { return std::max({c1, c2, group_law, commutes_E, unitarity}); }
};

inline ExtensionReport check_extension(const DilationBundle& b, const std::vector<Angles>& thetas) {
  ExtensionReport rep;
  const WeylPair& h = b.base();
  const Matrix j = b.exact_domain();
  const auto ext = extend_U(b, thetas);
  const auto box = b.budget_box().points();
  auto norm_of = [](const Matrix& m) { return m.size() ? linalg::operator_norm(m) : 0.0; };

  // every extended U is diagonal in the model; products with it are taken as row scalings
  struct Shift {
    Point x;
    Matrix w, dom, image;
  };
  std::vector<Shift> ws;
  for (const auto& x : box)
    if (b.depth() > 0 || nonnegative(x)) {
      Matrix wx = b.W(x);
      Matrix dom = isometry_V(h, negative_part(x)) * j;
      Matrix image = wx * dom;
      ws.push_back({x, std::move(wx), std::move(dom), std::move(image)});
    }
  std::vector<Matrix> es;
  for (const auto& x : box) es.push_back(b.E(x));
  const Matrix embedded = b.embed() * j;

  for (std::size_t t = 0; t < thetas.size(); ++t) {
    const Matrix& ut = ext[t];
    const Vector ud = ut.diagonal();
    rep.unitarity = std::max(rep.unitarity, norm_of(ut.adjoint() * ut - Matrix::Identity(ut.rows(), ut.cols())));
    rep.c1 = std::max(rep.c1, norm_of(ud.asDiagonal() * embedded - b.embed() * (phase_diagonal(h, thetas[t]).asDiagonal() * j)));
    for (const auto& sh : ws) {
      const Matrix lhs = ud.asDiagonal() * sh.image;
      const Matrix rhs = character(thetas[t], sh.x) * (sh.w * (ud.asDiagonal() * sh.dom));
      rep.c2 = std::max(rep.c2, norm_of(lhs - rhs));
    }
    for (const auto& ex : es) {
      Matrix c = ex;
      for (Eigen::Index col = 0; col < c.cols(); ++col)
        for (Eigen::Index row = 0; row < c.rows(); ++row) c(row, col) *= ud(row) - ud(col);
      rep.commutes_E = std::max(rep.commutes_E, norm_of(c));
    }
    // every extended U is diagonal in the model, so the group law is checked entrywise
    const double off_diagonal = (ut - Matrix(ut.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
    rep.group_law = std::max(rep.group_law, off_diagonal);
    for (std::size_t t2 = 0; t2 < thetas.size(); ++t2) {
      Angles sum = thetas[t];
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += thetas[t2][i];
      const Vector prod = ut.diagonal().cwiseProduct(ext[t2].diagonal());
      const Vector direct = std::conj(character(sum, b.shift())) * phase_diagonal(h, sum);
      rep.group_law = std::max(rep.group_law, (prod - direct).cwiseAbs().maxCoeff());
    }
  }
  return rep;
}

/// Covariant representation: the dilation together with the E-family on the budget box.
class CovariantRep {
 public:
  explicit CovariantRep(DilationBundle bundle) : bundle_(std::move(bundle)) {
    box_ = bundle_.budget_box();
    for (const auto& x : box_.points()) family_.push_back(bundle_.E(x));
  }

  const DilationBundle& dilation() const { return bundle_; }
  const LatticeWindow& box() const { return box_; }
  const std::vector<Matrix>& family() const { return family_; }

  const Matrix& E(const Point& x) const {
    bundle_.require_budget(x);
    return family_[box_.index_of(x)];
  }

  /// pi(1_{X_u + x}) = E_x.
  const Matrix& pi_indicator(const Point& x) const { return E(x); }

 private:
  DilationBundle bundle_;
  LatticeWindow box_;
  std::vector<Matrix> family_;
};

/// pi(f) = weight * sum_x f(x) E_x.
inline Matrix pi_eval(const CovariantRep& rep, const TestFunction& f) {
  Matrix out = Matrix::Zero(rep.dilation().dim(), rep.dilation().dim());
  for (const auto& [x, v] : f.support()) out += v * rep.E(x);
  return f.window().weight() * out;
}

struct SpectralPattern {
  /// {x : E_x xi = xi}, a Y-set of the box.
  PSet pattern;
  int dimension;
};

/// Simultaneous diagonalisation of a commuting projection family indexed by the points of
/// `box`, splitting by the eigenspaces of each E_x in lexicographic order of x.
inline std::vector<SpectralPattern> joint_spectrum(const LatticeWindow& box, const std::vector<Matrix>& family) {
  if (family.size() != box.cardinality())
    throw Error(ErrorCode::InvalidArgument, "one projection per box point");
  if (family.empty()) return {};
  const Eigen::Index n = family.front().rows();
  struct Branch {
    Matrix basis;
    std::vector<Point> ones;
  };
  std::vector<Branch> branches{{Matrix::Identity(n, n), {}}};
  for (std::size_t xi = 0; xi < family.size(); ++xi) {
    std::vector<Branch> next;
    const Point x = box.point_at(xi);
    for (auto& br : branches) {
      const Matrix c = br.basis.adjoint() * family[xi] * br.basis;
      const Eigen::SelfAdjointEigenSolver<Matrix> es(c);
      std::vector<Eigen::Index> hi, lo;
      for (Eigen::Index k = 0; k < c.rows(); ++k) (es.eigenvalues()(k) > 0.5 ? hi : lo).push_back(k);
      auto take = [&](const std::vector<Eigen::Index>& idx) {
        Matrix m(br.basis.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = br.basis * es.eigenvectors().col(idx[k]);
        return m;
      };
      if (!hi.empty()) {
        Branch b{take(hi), br.ones};
        b.ones.push_back(x);
        next.push_back(std::move(b));
      }
      if (!lo.empty()) next.push_back(Branch{take(lo), br.ones});
    }
    branches = std::move(next);
  }
  std::vector<SpectralPattern> out;
  for (auto& br : branches) {
    try {
      out.push_back({validate_pset(br.ones, box, SetKind::YSet), static_cast<int>(br.basis.cols())});
    } catch (const Error& e) {
      throw Error(ErrorCode::PatternNotYSet, std::string("joint eigenvalue pattern is not a Y-set: ") + e.what());
    }
  }
  std::sort(out.begin(), out.end(), [](const SpectralPattern& a, const SpectralPattern& b) {
    return a.pattern.points() < b.pattern.points();
  });
  return out;
}

inline std::vector<SpectralPattern> joint_spectrum(const CovariantRep& rep) {
  return joint_spectrum(rep.box(), rep.family());
}

/// The pair on the range of E_0 with V_a the compression of W_a. Positions are K positions,
/// so the result lives on [lo, hi - s].
inline WeylPair compress_phi(const CovariantRep& rep) {
  const DilationBundle& b = rep.dilation();
  const WeylPair& h = b.base();
  const auto& w = h.window();
  const Point& s = b.shift();
  const LatticeWindow out_window(w.lo(), subtract(w.hi(), s), w.weight());
  const Matrix& e0 = rep.E(Point(s.size(), 0));

  // orthonormal basis of range(E_0) in each model block at H-position z + s
  std::vector<Matrix> blocks;
  std::vector<int> fibers;
  std::vector<int> offset_in_model;
  for (const auto& z : out_window.points()) {
    const auto idx = w.index_of(add(z, s));
    const int k = h.fiber_at(idx);
    const int o = h.offset_at(idx);
    Matrix blk = k > 0 ? linalg::projection_range(Matrix(e0.block(o, o, k, k))) : Matrix(0, 0);
    fibers.push_back(static_cast<int>(blk.cols()));
    blocks.push_back(std::move(blk));
    offset_in_model.push_back(o);
  }
  Eigen::Index n = 0;
  for (int f : fibers) n += f;
  Matrix basis = Matrix::Zero(h.dim(), n);
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (fibers[i] == 0) continue;
    basis.block(offset_in_model[i], col, blocks[i].rows(), fibers[i]) = blocks[i];
    col += fibers[i];
  }
  std::vector<SparseMatrix> gens;
  for (int ax = 0; ax < h.spatial_dim(); ++ax) {
    const Matrix g = basis.adjoint() * Matrix(h.generators()[ax]) * basis;
    gens.push_back(g.sparseView(1.0, 1e-14));
  }
  return WeylPair(out_window, std::move(fibers), std::move(gens), h.label());
}

struct DecomposedComponent {
  PSet pspace;
  int multiplicity;
  /// Shift taking the componentwise minimum of the set to the window's lower corner.
  Point translation;
  /// pspace + translation, clipped to the window.
  std::vector<Point> normalized;
};

struct Decomposition {
  std::vector<DecomposedComponent> components;
  bool reassembly_equivalent = false;
  double reassembly_residual = 0.0;
};

/// Splits a commuting-range pair into canonical (A, k) pieces along the minimal central
/// projections of the algebra generated by U and V, then verifies the reassembly.
inline Decomposition decompose(const WeylPair& pair, const EngineOptions& opt = {}) {
  const auto& w = pair.window();
  const int d = pair.spatial_dim();
  int bound = 2;
  for (int i = 0; i < d; ++i) bound = std::min(bound, w.side(i) - 1);
  const double c = check_commuting_ranges(pair, probe_box(d, std::max(bound, 0)));
  if (c > tol::kStructural)
    throw Error(ErrorCode::NotCommuting, "range projections fail to commute (" + std::to_string(c) + ")");

  const auto grid = dual_grid(w);
  std::vector<Matrix> samples;
  for (const auto& t : grid) samples.push_back(unitary_U(pair, t));
  const auto positions = positions_from_U_samples(w, grid, samples);

  const RepGens gens = pair_rep_gens(pair);
  const auto summary = summarize(gens, opt);

  std::map<std::vector<Point>, int> found;
  for (const auto& q : summary.central_blocks) {
    std::vector<Point> pts;
    int k = -1;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const Matrix c2 = q.adjoint() * positions[i] * q;
      const int r = linalg::projection_rank(Matrix(0.5 * (c2 + c2.adjoint())));
      if (r == 0) continue;
      if (k >= 0 && r != k)
        throw Error(ErrorCode::FiberMismatch, "fiber dimension changes inside one factor block at " +
                                                  format_point(w.point_at(i)));
      k = r;
      pts.push_back(w.point_at(i));
    }
    if (pts.empty()) continue;
    found[pts] += k;
  }

  Decomposition out;
  std::vector<WeylPair> canon;
  for (const auto& [pts, k] : found) {
    PSet a = validate_pset(pts, w, SetKind::PSpace);
    Point t = subtract(w.lo(), a.lower_corner());
    auto shifted = translate_pset(a, t).points;
    canon.push_back(build_pspace_pair(a, k));
    out.components.push_back({std::move(a), k, std::move(t), std::move(shifted)});
  }
  if (canon.empty()) return out;
  const WeylPair sum = direct_sum(canon);
  if (sum.dim() == pair.dim()) {
    const auto eq = unitarily_equivalent(pair_rep_gens(sum), gens, opt);
    out.reassembly_equivalent = eq.equivalent;
    out.reassembly_residual = eq.residual;
  }
  return out;
}

}  // namespace weylpair
