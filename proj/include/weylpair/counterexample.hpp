#pragma once

// The P = R_+^2 construction: two sequences of mutually orthogonal projections, the step map
// F_{(m,n)}, the increasing projection field E_{(s,t)} selected by a fixed evaluation point,
// and the weak Weyl pair obtained by compressing grid shifts to the range of E.

#include <array>
#include <cmath>
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

using Index2 = std::pair<int, int>;

class ProjectionFamily {
 public:
  ProjectionFamily(int kappa, std::vector<Matrix> p, std::vector<Matrix> q)
      : kappa_(kappa), p_(std::move(p)), q_(std::move(q)) {
    if (kappa_ < 1) throw Error(ErrorCode::InvalidArgument, "coefficient dimension must be positive");
    check_orthogonal(p_, "P");
    check_orthogonal(q_, "Q");
  }

  int kappa() const { return kappa_; }
  const std::vector<Matrix>& P() const { return p_; }
  const std::vector<Matrix>& Q() const { return q_; }
  int M() const { return static_cast<int>(p_.size()); }
  int Mprime() const { return static_cast<int>(q_.size()); }

  /// Replaces F_{(m,n)} by an arbitrary matrix (used to build deliberately broken fields).
  void override_F(Index2 mn, Matrix value) { overrides_[mn] = std::move(value); }
  const std::map<Index2, Matrix>& overrides() const { return overrides_; }

 private:
  void check_orthogonal(const std::vector<Matrix>& list, const char* name) const {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].rows() != kappa_ || list[i].cols() != kappa_)
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " projection has wrong size");
      for (std::size_t j = 0; j < list.size(); ++j) {
        const Matrix target = i == j ? list[i] : Matrix::Zero(kappa_, kappa_);
        if (linalg::operator_norm(Matrix(list[i] * list[j] - target)) > 1e-12 ||
            linalg::operator_norm(Matrix(list[i] - list[i].adjoint())) > 1e-12)
          throw Error(ErrorCode::InvalidArgument,
                      std::string(name) + "_i P_j must equal delta_ij P_i (indices " + std::to_string(i + 1) +
                          ", " + std::to_string(j + 1) + ")");
      }
    }
  }

  int kappa_;
  std::vector<Matrix> p_;
  std::vector<Matrix> q_;
  std::map<Index2, Matrix> overrides_;
};

/// Rank-one projections onto the columns of a unitary.
inline std::vector<Matrix> rank_one_projections(const Matrix& basis) {
  std::vector<Matrix> out;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) out.push_back(basis.col(j) * basis.col(j).adjoint());
  return out;
}

/// P_m onto the standard basis, Q_n onto the columns of a seeded Haar unitary.
inline ProjectionFamily demo_family(int kappa = 6, std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  const Matrix id = Matrix::Identity(kappa, kappa);
  return ProjectionFamily(kappa, rank_one_projections(id), rank_one_projections(linalg::random_unitary(kappa, rng)));
}

/// Stand-in for the character z_0: evaluation at p0 inside [a,b] x [c,d].
struct EvaluationPoint {
  double a = 0.3, b = 0.4, c = 0.3, d = 0.4;
  std::array<double, 2> p0{0.35, 0.35};

  void validate() const {
    if (!(0.0 < a && a < b && b < 1.0 && 0.0 < c && c < d && d < 1.0))
      throw Error(ErrorCode::InvalidArgument, "need 0 < a < b < 1 and 0 < c < d < 1");
    if (p0[0] < a || p0[0] > b || p0[1] < c || p0[1] > d)
      throw Error(ErrorCode::InvalidArgument, "p0 must lie in [a,b] x [c,d]");
  }
};

/// Axis values offset + i*h, i = 0,1,..., below the extent S; h = 1/q.
struct GridSpec {
  int q = 10;
  double extent = 4.0;
  std::optional<double> offset;

  double step() const { return 1.0 / q; }
  double offset_value() const { return offset.value_or(step() * (std::sqrt(5.0) - 1.0) / 4.0); }

  double value(int i) const { return offset_value() + i * step(); }

  int count() const {
    if (q < 1 || !(extent > 0.0)) return 0;
    int n = 0;
    while (value(n) < extent - 1e-12) ++n;
    return n;
  }

  std::vector<double> values() const {
    std::vector<double> out;
    for (int i = 0; i < count(); ++i) out.push_back(value(i));
    return out;
  }

  /// Rejects grids on which some m+1-s or n+1-t hits p0 (for the given lattice index range).
  void validate(const EvaluationPoint& ev, int lo = 0, int hi = -1) const {
    if (q < 1) throw Error(ErrorCode::InvalidArgument, "grid needs a positive step count");
    if (hi < lo) hi = count() - 1;
    for (int i = lo; i <= hi; ++i) {
      const double s = value(i);
      const double r = std::floor(s) + 1.0 - s;
      for (double p : ev.p0)
        if (std::abs(r - p) <= 1e-12)
          throw Error(ErrorCode::BoundaryCoincidence, "grid value " + std::to_string(s) + " puts p0 on a cell edge");
    }
  }
};

/// F_{(m,n)}: sum of the first m P's when n = 0, of the first n Q's when m = 0, identity when
/// both are positive, zero otherwise.
inline Matrix f_proj(const ProjectionFamily& fam, int m, int n) {
  if (auto it = fam.overrides().find({m, n}); it != fam.overrides().end()) return it->second;
  const int k = fam.kappa();
  if (m >= 1 && n >= 1) return Matrix::Identity(k, k);
  Matrix out = Matrix::Zero(k, k);
  if (m >= 1 && n == 0) {
    if (m > fam.M())
      throw Error(ErrorCode::IndexBeyondFamily, "F(" + std::to_string(m) + ",0) needs P_" + std::to_string(m));
    for (int i = 0; i < m; ++i) out += fam.P()[static_cast<std::size_t>(i)];
  } else if (m == 0 && n >= 1) {
    if (n > fam.Mprime())
      throw Error(ErrorCode::IndexBeyondFamily, "F(0," + std::to_string(n) + ") needs Q_" + std::to_string(n));
    for (int i = 0; i < n; ++i) out += fam.Q()[static_cast<std::size_t>(i)];
  }
  return out;
}

/// Index (m', n') of the F value that E_{(s,t)} selects, or nothing outside R_+^2.
/// With r = m+1-s and r' = n+1-t the cells are R_0 = [0,r) x [0,r'), R_1 = [0,r) x [r',1],
/// R_2 = [r,1] x [0,r'), R_3 = [r,1] x [r',1].
inline std::optional<Index2> select_cell(const EvaluationPoint& ev, double s, double t) {
  if (s < 0.0 || t < 0.0) return std::nullopt;
  const int m = static_cast<int>(std::floor(s));
  const int n = static_cast<int>(std::floor(t));
  const double r = m + 1 - s;
  const double rp = n + 1 - t;
  if (ev.p0[0] == r || ev.p0[1] == rp)
    throw Error(ErrorCode::BoundaryCoincidence, "p0 lies on a cell boundary at (" + std::to_string(s) + ", " +
                                                    std::to_string(t) + ")");
  return Index2{ev.p0[0] < r ? m : m + 1, ev.p0[1] < rp ? n : n + 1};
}

inline Matrix eval_E(const ProjectionFamily& fam, const EvaluationPoint& ev, double s, double t) {
  const auto cell = select_cell(ev, s, t);
  if (!cell) return Matrix::Zero(fam.kappa(), fam.kappa());
  return f_proj(fam, cell->first, cell->second);
}

/// Whether the selected F index lies inside the truncated family.
inline bool within_family(const ProjectionFamily& fam, const std::optional<Index2>& cell) {
  if (!cell) return true;
  const auto [m, n] = *cell;
  if (fam.overrides().count(*cell)) return true;
  if (n == 0 && m > fam.M()) return false;
  if (m == 0 && n > fam.Mprime()) return false;
  return true;
}

/// max over comparable grid pairs (s,t) <= (s',t') of the most negative eigenvalue of
/// E_{(s',t')} - E_{(s,t)}, clamped at 0. Pairs selecting the same two F indices share one
/// eigenvalue computation.
inline double check_increasing(const ProjectionFamily& fam, const EvaluationPoint& ev, const GridSpec& grid) {
  ev.validate();
  grid.validate(ev);
  const auto vals = grid.values();
  const int n = static_cast<int>(vals.size());
  std::vector<std::optional<Index2>> cell(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cell[static_cast<std::size_t>(i * n + j)] = select_cell(ev, vals[i], vals[j]);

  std::map<std::pair<std::optional<Index2>, std::optional<Index2>>, double> memo;
  auto value_of = [&](const std::optional<Index2>& c) {
    return c ? f_proj(fam, c->first, c->second) : Matrix(Matrix::Zero(fam.kappa(), fam.kappa()));
  };
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int i2 = i; i2 < n; ++i2)
        for (int j2 = j; j2 < n; ++j2) {
          const auto key = std::make_pair(cell[static_cast<std::size_t>(i * n + j)], cell[static_cast<std::size_t>(i2 * n + j2)]);
          auto it = memo.find(key);
          if (it == memo.end()) {
            const double ev_min = linalg::smallest_eigenvalue(value_of(key.second) - value_of(key.first));
            it = memo.emplace(key, std::max(0.0, -ev_min)).first;
          }
          worst = std::max(worst, it->second);
        }
  return worst;
}

struct PlateauResult {
  /// Grid index pairs (i, j) inside the unit cell where E equals F_{(m,n)}.
  std::vector<Index2> points;
  int cell_points = 0;
  double fraction = 0.0;
  /// Every grid point of s in (m, m+1-b), t in (n, n+1-d) lies on the plateau.
  bool contains_proof_region = true;
};

inline PlateauResult plateau(const ProjectionFamily& fam, const EvaluationPoint& ev, int m, int n, const GridSpec& grid) {
  ev.validate();
  const Matrix target = f_proj(fam, m, n);
  const auto vals = grid.values();
  PlateauResult res;
  for (int i = 0; i < static_cast<int>(vals.size()); ++i) {
    const double s = vals[i];
    if (s < m || s >= m + 1) continue;
    for (int j = 0; j < static_cast<int>(vals.size()); ++j) {
      const double t = vals[j];
      if (t < n || t >= n + 1) continue;
      ++res.cell_points;
      const bool on = linalg::operator_norm(Matrix(eval_E(fam, ev, s, t) - target)) <= 1e-12;
      if (on) res.points.emplace_back(i, j);
      const bool in_proof = s > m && s < m + 1 - ev.b && t > n && t < n + 1 - ev.d;
      if (in_proof && !on) res.contains_proof_region = false;
    }
  }
  res.fraction = res.cell_points ? static_cast<double>(res.points.size()) / res.cell_points : 0.0;
  return res;
}

/// Weak Weyl pair over the lattice box `window` of grid indices: the fiber at (i,j) is the
/// range of E at (value(i), value(j)), and V_{e_k} is the one-step grid shift compressed to H.
inline WeylPair build_r2_pair(const ProjectionFamily& fam, const EvaluationPoint& ev, const GridSpec& grid,
                              const LatticeWindow& window) {
  ev.validate();
  if (window.dim() != 2) throw Error(ErrorCode::InvalidArgument, "the R^2 pair needs a 2-dimensional window");
  grid.validate(ev, std::min(window.lo()[0], window.lo()[1]), std::max(window.hi()[0], window.hi()[1]));
  const auto pts = window.points();
  std::vector<Matrix> bases;
  std::vector<Matrix> projections;
  std::vector<int> fibers;
  for (const auto& y : pts) {
    const Matrix e = eval_E(fam, ev, grid.value(y[0]), grid.value(y[1]));
    bases.push_back(linalg::projection_range(e));
    projections.push_back(e);
    fibers.push_back(static_cast<int>(bases.back().cols()));
  }
  std::vector<int> offsets(fibers.size() + 1, 0);
  for (std::size_t i = 0; i < fibers.size(); ++i) offsets[i + 1] = offsets[i] + fibers[i];
  const Eigen::Index n = offsets.back();

  std::vector<SparseMatrix> gens;
  for (int ax = 0; ax < 2; ++ax) {
    std::vector<Eigen::Triplet<Complex>> trips;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (fibers[i] == 0) continue;
      Point z = pts[i];
      ++z[ax];
      if (!window.contains(z)) continue;
      const auto j = window.index_of(z);
      const Matrix& from = bases[i];
      const Matrix& to = bases[j];
      const double leak = from.size() ? linalg::operator_norm(Matrix(from - projections[j] * from)) : 0.0;
      if (leak > tol::kStructural)
        throw Error(ErrorCode::MonotonicityBroken,
                    "range of E at " + format_point(pts[i]) + " is not inside the range at " + format_point(z));
      const Matrix block = to.adjoint() * from;
      for (Eigen::Index r = 0; r < block.rows(); ++r)
        for (Eigen::Index c = 0; c < block.cols(); ++c)
          if (std::abs(block(r, c)) > 1e-15) trips.emplace_back(offsets[j] + r, offsets[i] + c, block(r, c));
    }
    SparseMatrix g(n, n);
    g.setFromTriplets(trips.begin(), trips.end());
    gens.push_back(std::move(g));
  }
  const double h = grid.step();
  return WeylPair(LatticeWindow(window.lo(), window.hi(), h * h), std::move(fibers), std::move(gens),
                  "R2 counterexample kappa=" + std::to_string(fam.kappa()));
}

/// max over grid points x of ||E_x E_{x-a} - E_{x-a}||, the pointwise form of
/// E~ W_a E~ = W_a E~ for a grid shift a = (a0, a1) >= 0 in grid steps.
inline double compression_identity_defect(const ProjectionFamily& fam, const EvaluationPoint& ev,
                                          const GridSpec& grid, int a0, int a1) {
  const int n = grid.count();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int i0 = i - a0, j0 = j - a1;
      const double s0 = i0 >= 0 ? grid.value(i0) : -1.0;
      const double t0 = j0 >= 0 ? grid.value(j0) : -1.0;
      const Matrix prev = eval_E(fam, ev, s0, t0);
      const Matrix here = eval_E(fam, ev, grid.value(i), grid.value(j));
      worst = std::max(worst, linalg::operator_norm(Matrix(here * prev - prev)));
    }
  return worst;
}

struct TransferResult {
  int sampled_dim = 0;
  int family_dim = 0;
  bool equal = false;
  double angle_sine = 1.0;
};

/// Commutant of the sampled E-field versus the commutant of {P_m, Q_n}.
inline TransferResult commutant_transfer_check(const ProjectionFamily& fam, const EvaluationPoint& ev,
                                               const GridSpec& grid, const EngineOptions& opt = {}) {
  ev.validate();
  grid.validate(ev);
  const auto vals = grid.values();
  std::map<Index2, Matrix> sampled;
  for (double s : vals)
    for (double t : vals) {
      const auto c = select_cell(ev, s, t);
      if (!c || !within_family(fam, c) || sampled.count(*c)) continue;
      sampled.emplace(*c, f_proj(fam, c->first, c->second));
    }
  for (int m = 1; m <= fam.M(); ++m)
    if (!sampled.count({m, 0}))
      throw Error(ErrorCode::GridTooSmall, "no grid point selects F(" + std::to_string(m) + ",0)");
  for (int n = 1; n <= fam.Mprime(); ++n)
    if (!sampled.count({0, n}))
      throw Error(ErrorCode::GridTooSmall, "no grid point selects F(0," + std::to_string(n) + ")");

  std::vector<Matrix> e_gens;
  for (auto& [k, v] : sampled) e_gens.push_back(v);
  std::vector<Matrix> f_gens = fam.P();
  f_gens.insert(f_gens.end(), fam.Q().begin(), fam.Q().end());
  const auto ce = commutant_basis(RepGens(fam.kappa(), e_gens), opt);
  const auto cf = commutant_basis(RepGens(fam.kappa(), f_gens), opt);
  TransferResult res;
  res.sampled_dim = static_cast<int>(ce.size());
  res.family_dim = static_cast<int>(cf.size());
  res.angle_sine = linalg::principal_angle_sine(linalg::vectorize(ce), linalg::vectorize(cf));
  res.equal = res.sampled_dim == res.family_dim && res.angle_sine <= tol::kKernel;
  return res;
}

/// Grid index pairs (i, j) of [0, S]^2 where E is nonzero: the position support of the pair.
inline std::vector<Index2> spec_support(const ProjectionFamily& fam, const EvaluationPoint& ev, const GridSpec& grid) {
  ev.validate();
  grid.validate(ev);
  const auto vals = grid.values();
  std::vector<Index2> out;
  for (int i = 0; i < static_cast<int>(vals.size()); ++i)
    for (int j = 0; j < static_cast<int>(vals.size()); ++j)
      if (eval_E(fam, ev, vals[i], vals[j]).norm() > 0.5) out.emplace_back(i, j);
  return out;
}

/// Rank of E on the grid, row-major over (s, t).
inline std::vector<std::array<double, 3>> rank_field(const ProjectionFamily& fam, const EvaluationPoint& ev,
                                                     const GridSpec& grid) {
  const auto vals = grid.values();
  std::vector<std::array<double, 3>> out;
  for (double s : vals)
    for (double t : vals) {
      const auto c = select_cell(ev, s, t);
      const double rank = within_family(fam, c) ? linalg::projection_rank(eval_E(fam, ev, s, t)) : std::nan("");
      out.push_back({s, t, rank});
    }
  return out;
}

}  // namespace weylpair
