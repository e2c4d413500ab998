#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "weylpair/types.hpp"

namespace weylpair::linalg {

/// Largest singular value.
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double operator_norm(const SparseMatrix& m) { return operator_norm(Matrix(m)); }

/// max(||P^2 - P||, ||P - P*||).
inline double projection_defect(const Matrix& p) {
  return std::max(operator_norm(p * p - p), operator_norm(p - p.adjoint()));
}

inline double smallest_eigenvalue(const Matrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Haar-distributed unitary from the QR decomposition of a complex Ginibre matrix.
inline Matrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

/// Orthonormal basis of the range of a Hermitian idempotent (eigenvalues rounded at 0.5).
inline Matrix projection_range(const Matrix& p) {
  if (p.rows() == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  Matrix basis(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    basis.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
  return basis;
}

inline int projection_rank(const Matrix& p) {
  return static_cast<int>(projection_range(p).cols());
}

/// Right singular vectors spanning the numerical kernel of `a`. A singular value counts as
/// zero when it is at most `rel_tol * scale`; `scale` defaults to the largest singular value.
inline Matrix kernel(const Matrix& a, double rel_tol, double scale = -1.0) {
  const Eigen::Index n = a.cols();
  if (n == 0) return Matrix(0, 0);
  Matrix reduced;
  if (a.rows() > n) {
    Eigen::HouseholderQR<Matrix> qr(a);
    reduced = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  } else {
    reduced = a;
  }
  Eigen::JacobiSVD<Matrix> svd(reduced, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const double top = scale >= 0.0 ? scale : (sv.size() ? sv(0) : 0.0);
  const double cutoff = rel_tol * top;
  // Singular values beyond the row count are structurally zero.
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = i < sv.size() ? sv(i) : 0.0;
    if (s <= cutoff || top == 0.0) null_cols.push_back(i);
  }
  Matrix out(n, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t j = 0; j < null_cols.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = svd.matrixV().col(null_cols[j]);
  return out;
}

/// Orthonormalise the columns of `a`, dropping numerically dependent directions.
inline Matrix orthonormal_columns(const Matrix& a, double rel_tol = 1e-10) {
  if (a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const RealVector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  const double top = sv.size() ? sv(0) : 0.0;
  while (rank < sv.size() && sv(rank) > rel_tol * top && top > 0) ++rank;
  return svd.matrixU().leftCols(rank);
}

/// Sine of the largest principal angle between the column spans of two orthonormal bases.
/// Spaces of different dimension are at angle pi/2 (returns 1).
inline double principal_angle_sine(const Matrix& q1, const Matrix& q2) {
  if (q1.cols() != q2.cols()) return 1.0;
  if (q1.cols() == 0) return 0.0;
  const Matrix residual = q2 - q1 * (q1.adjoint() * q2);
  return std::min(1.0, operator_norm(residual));
}

/// Column-stacked vectorisation of a list of equally sized matrices.
inline Matrix vectorize(const std::vector<Matrix>& mats) {
  if (mats.empty()) return Matrix(0, 0);
  const Eigen::Index len = mats.front().size();
  Matrix out(len, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t j = 0; j < mats.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Vector>(mats[j].data(), len);
  return out;
}

/// Groups sorted values into clusters: consecutive values closer than `gap` share a cluster.
inline std::vector<std::pair<std::size_t, std::size_t>> cluster_sorted(
    const std::vector<double>& sorted, double gap) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i == sorted.size() || sorted[i] - sorted[i - 1] > gap) {
      if (i > start) ranges.emplace_back(start, i);
      start = i;
    }
  }
  return ranges;
}

}  // namespace weylpair::linalg
