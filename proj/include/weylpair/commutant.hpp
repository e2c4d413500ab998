#pragma once

// Commutants, intertwiner spaces, centers and unitary-equivalence decisions for finite sets
// of complex matrices.
//
// The linear system {T : T X_a = X_b T for all X} is solved in a reduced basis. A random
// Hermitian combination h of the generators must itself be intertwined, so in eigenbases of
// h_a and h_b the unknown T can only couple eigenvectors with (numerically) equal
// eigenvalues. The remaining unknowns are found from the Gram matrix of the residual map,
// and the low end of its spectrum is re-checked with an explicit residual SVD.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "weylpair/linalg.hpp"
#include "weylpair/types.hpp"
#include "weylpair/weyl_pair.hpp"

namespace weylpair {

/// A finite generating set of a *-algebra of n x n matrices. Labels align generators when two
/// representations are compared.
struct RepGens {
  int dim = 0;
  std::vector<Matrix> gens;
  std::vector<std::string> labels;

  RepGens() = default;

  RepGens(int n, std::vector<Matrix> g, std::vector<std::string> l = {})
      : dim(n), gens(std::move(g)), labels(std::move(l)) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative dimension");
    for (const auto& x : gens)
      if (x.rows() != n || x.cols() != n)
        throw Error(ErrorCode::InvalidArgument, "generators must be square of the declared dimension");
    if (!labels.empty() && labels.size() != gens.size())
      throw Error(ErrorCode::InvalidArgument, "one label per generator");
  }
};

struct EngineOptions {
  /// Relative singular-value cutoff for the kernel.
  double tol = tol::kKernel;
  /// Largest matrix dimension accepted.
  int guard = 256;
  /// Largest number of unknowns kept after the spectral reduction.
  std::size_t max_unknowns = 2500;
  std::uint64_t seed = 0x5eedULL;
};

namespace detail {

inline bool is_hermitian(const Matrix& x) {
  return (x - x.adjoint()).norm() <= 1e-14 * std::max(1.0, x.norm());
}

inline std::optional<Complex> scalar_value(const Matrix& x) {
  const Eigen::Index n = x.rows();
  if (n == 0) return Complex(0.0);
  const Complex c = x.trace() / static_cast<double>(n);
  const Matrix diff = x - c * Matrix::Identity(n, n);
  if (diff.norm() <= 1e-12 * std::max(1.0, x.norm())) return c;
  return std::nullopt;
}

inline std::vector<Matrix> matrix_units(Eigen::Index rows, Eigen::Index cols) {
  std::vector<Matrix> out;
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      Matrix e = Matrix::Zero(rows, cols);
      e(i, j) = 1.0;
      out.push_back(std::move(e));
    }
  return out;
}

// Basis of {T (nb x na) : T xa[i] = xb[i] T for all i}; the lists must already be closed
// under adjoints pairwise.
inline std::vector<Matrix> solve_intertwiners(const std::vector<Matrix>& xa, const std::vector<Matrix>& xb,
                                              Eigen::Index na, Eigen::Index nb, const EngineOptions& opt) {
  if (na > opt.guard || nb > opt.guard)
    throw Error(ErrorCode::DimensionGuard, "dimension " + std::to_string(std::max(na, nb)) +
                                               " exceeds guard " + std::to_string(opt.guard));
  if (na == 0 || nb == 0) return {};
  if (xa.empty()) return matrix_units(nb, na);

  bool all_scalar = true, scalars_agree = true;
  for (std::size_t i = 0; i < xa.size() && all_scalar; ++i) {
    const auto ca = scalar_value(xa[i]);
    const auto cb = scalar_value(xb[i]);
    if (!ca || !cb) {
      all_scalar = false;
    } else if (std::abs(*ca - *cb) > 1e-12 * std::max({1.0, std::abs(*ca), std::abs(*cb)})) {
      scalars_agree = false;
    }
  }
  if (all_scalar) return scalars_agree ? matrix_units(nb, na) : std::vector<Matrix>{};

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix ha = Matrix::Zero(na, na), hb = Matrix::Zero(nb, nb);
  const Complex half_i(0.0, 0.5);
  for (std::size_t i = 0; i < xa.size(); ++i) {
    const double s = std::max({xa[i].norm(), xb[i].norm(), 1e-300});
    const double r1 = gauss(rng) / s, r2 = gauss(rng) / s;
    ha += r1 * 0.5 * (xa[i] + xa[i].adjoint()) - r2 * half_i * (xa[i] - xa[i].adjoint());
    hb += r1 * 0.5 * (xb[i] + xb[i].adjoint()) - r2 * half_i * (xb[i] - xb[i].adjoint());
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> ea(ha), eb(hb);
  const Matrix& ba = ea.eigenvectors();
  const Matrix& bb = eb.eigenvectors();

  struct Eig {
    double value;
    int side;
    Eigen::Index index;
  };
  std::vector<Eig> eigs;
  double scale = 1.0;
  for (Eigen::Index i = 0; i < na; ++i) {
    eigs.push_back({ea.eigenvalues()(i), 0, i});
    scale = std::max(scale, std::abs(ea.eigenvalues()(i)));
  }
  for (Eigen::Index i = 0; i < nb; ++i) {
    eigs.push_back({eb.eigenvalues()(i), 1, i});
    scale = std::max(scale, std::abs(eb.eigenvalues()(i)));
  }
  std::sort(eigs.begin(), eigs.end(), [](const Eig& l, const Eig& r) { return l.value < r.value; });
  std::vector<double> sorted;
  for (const auto& e : eigs) sorted.push_back(e.value);

  // unknown u is the matrix unit |p><q| with p a b-eigenvector, q an a-eigenvector
  std::vector<std::pair<Eigen::Index, Eigen::Index>> unknowns;
  for (const auto& [lo, hi] : linalg::cluster_sorted(sorted, 1e-6 * scale)) {
    std::vector<Eigen::Index> pa, pb;
    for (std::size_t k = lo; k < hi; ++k) (eigs[k].side == 0 ? pa : pb).push_back(eigs[k].index);
    for (auto q : pa)
      for (auto p : pb) unknowns.emplace_back(p, q);
  }
  const auto d = static_cast<Eigen::Index>(unknowns.size());
  if (d == 0) return {};
  if (unknowns.size() > opt.max_unknowns)
    throw Error(ErrorCode::DimensionGuard,
                std::to_string(d) + " reduced unknowns exceed the limit " + std::to_string(opt.max_unknowns));

  std::vector<Matrix> ta, tb;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    ta.push_back(ba.adjoint() * xa[i] * ba);
    tb.push_back(bb.adjoint() * xb[i] * bb);
  }

  // Gram matrix of the residual map T -> (T A - B T) over all generators, on matrix units.
  Matrix gram = Matrix::Zero(d, d);
  for (std::size_t g = 0; g < ta.size(); ++g) {
    const Matrix& a = ta[g];
    const Matrix& b = tb[g];
    const Matrix aas = a * a.adjoint();
    const Matrix bsb = b.adjoint() * b;
    for (Eigen::Index v = 0; v < d; ++v) {
      const auto [pv, qv] = unknowns[static_cast<std::size_t>(v)];
      for (Eigen::Index u = 0; u <= v; ++u) {
        const auto [pu, qu] = unknowns[static_cast<std::size_t>(u)];
        Complex s = -std::conj(a(qu, qv)) * b(pu, pv) - a(qv, qu) * std::conj(b(pv, pu));
        if (pu == pv) s += aas(qv, qu);
        if (qu == qv) s += bsb(pu, pv);
        gram(u, v) += s;
      }
    }
  }
  for (Eigen::Index v = 0; v < d; ++v)
    for (Eigen::Index u = 0; u < v; ++u) gram(v, u) = std::conj(gram(u, v));

  // Scale of the full map T -> (T A - B T): the reduced Gram alone can be pure roundoff when
  // every reduced unknown lies in the kernel, so the Frobenius bound sets the floor.
  double bound = 0.0;
  for (std::size_t g = 0; g < ta.size(); ++g) bound += std::pow(ta[g].norm() + tb[g].norm(), 2);
  const Eigen::SelfAdjointEigenSolver<Matrix> eg(gram);
  const double lmax = std::max({0.0, eg.eigenvalues()(d - 1), 1e-4 * bound});
  std::vector<Eigen::Index> cand;
  for (Eigen::Index i = 0; i < d; ++i)
    if (eg.eigenvalues()(i) <= 1e-6 * lmax || lmax <= 1e-300) cand.push_back(i);
  if (cand.empty()) return {};

  auto assemble = [&](const Vector& y) {
    Matrix t = Matrix::Zero(nb, na);
    for (Eigen::Index u = 0; u < d; ++u) {
      const auto [p, q] = unknowns[static_cast<std::size_t>(u)];
      t(p, q) += y(u);
    }
    return t;
  };

  const auto m = static_cast<Eigen::Index>(cand.size());
  Matrix cvec(d, m);
  for (Eigen::Index j = 0; j < m; ++j) cvec.col(j) = eg.eigenvectors().col(cand[static_cast<std::size_t>(j)]);
  const Eigen::Index block = nb * na;
  Matrix stacked(block * static_cast<Eigen::Index>(ta.size()), m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Matrix t = assemble(cvec.col(j));
    for (std::size_t g = 0; g < ta.size(); ++g) {
      const Matrix r = t * ta[g] - tb[g] * t;
      stacked.block(static_cast<Eigen::Index>(g) * block, j, block, 1) = Eigen::Map<const Vector>(r.data(), block);
    }
  }
  const Matrix null = linalg::kernel(stacked, opt.tol, std::sqrt(lmax));
  std::vector<Matrix> out;
  for (Eigen::Index j = 0; j < null.cols(); ++j) out.push_back(bb * assemble(cvec * null.col(j)) * ba.adjoint());
  return out;
}

inline void close_under_adjoint(const std::vector<Matrix>& a, const std::vector<Matrix>& b,
                                std::vector<Matrix>& ca, std::vector<Matrix>& cb) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca.push_back(a[i]);
    cb.push_back(b[i]);
    if (!is_hermitian(a[i]) || !is_hermitian(b[i])) {
      ca.push_back(a[i].adjoint());
      cb.push_back(b[i].adjoint());
    }
  }
}

}  // namespace detail

/// Frobenius-orthonormal basis of {T : T X_a = X_b T and T X_a* = X_b* T for every aligned pair}.
inline std::vector<Matrix> intertwiners(const RepGens& ra, const RepGens& rb, const EngineOptions& opt = {}) {
  if (ra.gens.size() != rb.gens.size() || ra.labels != rb.labels)
    throw Error(ErrorCode::LabelMismatch, "generator lists are not aligned");
  std::vector<Matrix> ca, cb;
  detail::close_under_adjoint(ra.gens, rb.gens, ca, cb);
  return detail::solve_intertwiners(ca, cb, ra.dim, rb.dim, opt);
}

inline std::vector<Matrix> commutant_basis(const RepGens& r, const EngineOptions& opt = {}) {
  return intertwiners(r, r, opt);
}

/// Commutant of the commutant, solved directly. Intended for small instances.
inline std::vector<Matrix> bicommutant_basis(const RepGens& r, const EngineOptions& opt = {}) {
  return commutant_basis(RepGens(r.dim, commutant_basis(r, opt)), opt);
}

/// Coefficients expressing `x` in an orthonormal basis, and the residual norm.
inline std::pair<Vector, double> expand_in_basis(const std::vector<Matrix>& basis, const Matrix& x) {
  Vector c(static_cast<Eigen::Index>(basis.size()));
  Matrix rest = x;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    c(static_cast<Eigen::Index>(i)) = (basis[i].adjoint() * x).trace();
    rest -= c(static_cast<Eigen::Index>(i)) * basis[i];
  }
  return {c, rest.norm()};
}

/// Elements of the algebra spanned by `algebra` (assumed adjoint-closed) that commute with all
/// of it. Commuting with two random Hermitian elements suffices generically, since two generic
/// elements generate each matrix block.
inline std::vector<Matrix> center_of(const std::vector<Matrix>& algebra, std::uint64_t seed = 0x5eedULL) {
  const auto m = static_cast<Eigen::Index>(algebra.size());
  if (m == 0) return {};
  const Eigen::Index n = algebra.front().rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Matrix> probes;
  if (m <= 4) {
    probes = algebra;
  } else {
    for (int k = 0; k < 2; ++k) {
      Matrix h = Matrix::Zero(n, n);
      for (const auto& c : algebra) h += gauss(rng) * (c + c.adjoint()) + Complex(0.0, gauss(rng)) * (c - c.adjoint());
      probes.push_back(std::move(h));
    }
  }
  const Eigen::Index block = n * n;
  Matrix sys(block * static_cast<Eigen::Index>(probes.size()), m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const Matrix c = algebra[static_cast<std::size_t>(i)] * probes[p] - probes[p] * algebra[static_cast<std::size_t>(i)];
      sys.block(static_cast<Eigen::Index>(p) * block, i, block, 1) = Eigen::Map<const Vector>(c.data(), block);
    }
  double scale = 0.0;
  for (const auto& p : probes) scale = std::max(scale, linalg::operator_norm(p));
  const Matrix null = linalg::kernel(sys, tol::kKernel, 2.0 * scale);
  std::vector<Matrix> out;
  for (Eigen::Index j = 0; j < null.cols(); ++j) {
    Matrix z = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < m; ++i) z += null(i, j) * algebra[static_cast<std::size_t>(i)];
    out.push_back(z);
  }
  return out;
}

/// Minimal projections of a commutative *-algebra given by a basis, read off the eigenspaces
/// of a random Hermitian element. Returns orthonormal range bases.
inline std::vector<Matrix> minimal_projections(const std::vector<Matrix>& center, std::uint64_t seed = 0x5eedULL) {
  if (center.empty()) return {};
  const Eigen::Index n = center.front().rows();
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix h = Matrix::Zero(n, n);
    for (const auto& z : center) {
      const double s = std::max(z.norm(), 1e-300);
      h += (gauss(rng) / s) * (z + z.adjoint()) + Complex(0.0, gauss(rng) / s) * (z - z.adjoint());
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    std::vector<double> vals(es.eigenvalues().data(), es.eigenvalues().data() + n);
    double scale = 1e-300;
    for (double v : vals) scale = std::max(scale, std::abs(v));
    const auto clusters = linalg::cluster_sorted(vals, 1e-6 * scale);
    if (clusters.size() != center.size()) continue;
    std::vector<Matrix> out;
    for (const auto& [lo, hi] : clusters)
      out.push_back(es.eigenvectors().middleCols(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(hi - lo)));
    return out;
  }
  throw Error(ErrorCode::CheckFailed, "could not separate the minimal central projections");
}

struct AlgebraSummary {
  int commutant_dim = 0;
  int center_dim = 0;
  int bicommutant_dim = 0;
  bool is_factor = false;
  bool is_irreducible = false;
  std::vector<Matrix> commutant_basis;
  std::vector<Matrix> center_basis;
  /// Orthonormal range bases of the minimal central projections.
  std::vector<Matrix> central_blocks;
};

/// Commutant, center and the generated algebra's dimension. The latter follows from the block
/// structure: on a minimal central projection Q of rank k*m, the commutant is M_k and the
/// algebra is M_m, so dim = sum of (rank Q / sqrt(dim QC))^2.
inline AlgebraSummary summarize(const RepGens& r, const EngineOptions& opt = {}) {
  AlgebraSummary s;
  s.commutant_basis = commutant_basis(r, opt);
  s.commutant_dim = static_cast<int>(s.commutant_basis.size());
  s.center_basis = center_of(s.commutant_basis, opt.seed);
  s.center_dim = static_cast<int>(s.center_basis.size());
  s.is_factor = s.center_dim == 1;
  s.is_irreducible = s.commutant_dim == 1;
  if (s.commutant_dim == 0) return s;
  s.central_blocks = minimal_projections(s.center_basis, opt.seed);
  for (const auto& q : s.central_blocks) {
    // dim(Q C) = k^2 where Q C is spanned by q* C_j q
    const Eigen::Index rk = q.cols();
    std::vector<Matrix> compressed;
    for (const auto& c : s.commutant_basis) compressed.push_back(q.adjoint() * c * q);
    const Matrix vec = linalg::vectorize(compressed);
    const auto kk = linalg::orthonormal_columns(vec, 1e-8).cols();
    const auto k = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(kk))));
    if (k == 0 || k * k != kk || rk % k != 0)
      throw Error(ErrorCode::CheckFailed, "commutant block is not a full matrix algebra");
    s.bicommutant_dim += static_cast<int>((rk / k) * (rk / k));
  }
  return s;
}

struct EquivalenceResult {
  bool equivalent = false;
  std::optional<Matrix> witness;
  double residual = 0.0;
  int intertwiner_dim = 0;
};

/// Decides unitary equivalence by looking for an invertible intertwiner among random
/// combinations of an intertwiner basis; the witness is the unitary polar factor.
inline EquivalenceResult unitarily_equivalent(const RepGens& ra, const RepGens& rb, const EngineOptions& opt = {}) {
  EquivalenceResult res;
  if (ra.dim != rb.dim) {
    if (ra.gens.size() != rb.gens.size() || ra.labels != rb.labels)
      throw Error(ErrorCode::LabelMismatch, "generator lists are not aligned");
    return res;
  }
  const auto basis = intertwiners(ra, rb, opt);
  res.intertwiner_dim = static_cast<int>(basis.size());
  if (basis.empty()) return res;
  if (ra.dim == 0) {
    res.equivalent = true;
    res.witness = Matrix(0, 0);
    return res;
  }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int draw = 0; draw < 20; ++draw) {
    Matrix t = Matrix::Zero(rb.dim, ra.dim);
    double norm2 = 0.0;
    for (const auto& b : basis) {
      const Complex c(gauss(rng), gauss(rng));
      t += c * b;
      norm2 += std::norm(c);
    }
    t /= std::sqrt(norm2);
    Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()(ra.dim - 1) < tol::kInvertible) continue;
    const Matrix w = svd.matrixU() * svd.matrixV().adjoint();
    double resid = 0.0;
    for (std::size_t i = 0; i < ra.gens.size(); ++i) {
      const double scale = std::max(1.0, linalg::operator_norm(ra.gens[i]));
      resid = std::max(resid, linalg::operator_norm(Matrix(w * ra.gens[i] * w.adjoint() - rb.gens[i])) / scale);
    }
    res.residual = resid;
    if (resid <= tol::kWitness) {
      res.equivalent = true;
      res.witness = w;
      return res;
    }
  }
  return res;
}

enum class CharacterSampling {
  /// Every angle of the finite dual grid.
  Full,
  /// One angle 2 pi / N_i per axis; generates the same *-algebra as the full grid.
  Generators,
};

/// Dense generator list {U_theta, V_{e_i}} of a pair.
inline RepGens pair_rep_gens(const WeylPair& pair, CharacterSampling mode = CharacterSampling::Generators) {
  std::vector<Matrix> gens;
  std::vector<std::string> labels;
  const auto& w = pair.window();
  if (mode == CharacterSampling::Full) {
    const auto grid = dual_grid(w);
    for (std::size_t t = 0; t < grid.size(); ++t) {
      gens.push_back(unitary_U(pair, grid[t]));
      labels.push_back("U[" + std::to_string(t) + "]");
    }
  } else {
    for (int i = 0; i < w.dim(); ++i) {
      Angles theta(static_cast<std::size_t>(w.dim()), 0.0);
      theta[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi / w.side(i);
      gens.push_back(unitary_U(pair, theta));
      labels.push_back("U[e" + std::to_string(i) + "]");
    }
  }
  for (int i = 0; i < w.dim(); ++i) {
    gens.push_back(Matrix(pair.generators()[i]));
    labels.push_back("V[" + std::to_string(i) + "]");
  }
  return RepGens(pair.dim(), std::move(gens), std::move(labels));
}

/// Only the character unitaries.
inline RepGens pair_U_gens(const WeylPair& pair) {
  RepGens full = pair_rep_gens(pair, CharacterSampling::Generators);
  const auto d = static_cast<std::size_t>(pair.spatial_dim());
  full.gens.resize(d);
  full.labels.resize(d);
  return full;
}

}  // namespace weylpair
