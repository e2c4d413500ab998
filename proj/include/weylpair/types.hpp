#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace weylpair {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// A lattice point of Z^d. Ordered lexicographically.
using Point = std::vector<int>;

namespace tol {
/// Structural equalities (matrix norms).
inline constexpr double kStructural = 1e-10;
/// Projection / idempotency checks.
inline constexpr double kProjection = 1e-12;
/// Relative singular-value cutoff that defines a numerical kernel.
inline constexpr double kKernel = 1e-8;
/// Conjugation residual accepted for an equivalence witness.
inline constexpr double kWitness = 1e-8;
/// Smallest singular value an intertwiner needs to count as invertible.
inline constexpr double kInvertible = 1e-6;
}  // namespace tol

enum class ErrorCode {
  InvalidArgument,
  InvarianceViolation,
  EmptySet,
  BudgetExceeded,
  NonCommutingGenerators,
  MarginTooSmall,
  WindowMismatch,
  DimensionGuard,
  LabelMismatch,
  NonCommutingRanges,
  DepthZeroDegenerate,
  PatternNotYSet,
  WellDefinednessViolation,
  NotCommuting,
  FiberMismatch,
  IndexBeyondFamily,
  BoundaryCoincidence,
  MonotonicityBroken,
  GridTooSmall,
  ParseError,
  CheckFailed,
  IoError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvarianceViolation: return "InvarianceViolation";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NonCommutingGenerators: return "NonCommutingGenerators";
    case ErrorCode::MarginTooSmall: return "MarginTooSmall";
    case ErrorCode::WindowMismatch: return "WindowMismatch";
    case ErrorCode::DimensionGuard: return "DimensionGuard";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::NonCommutingRanges: return "NonCommutingRanges";
    case ErrorCode::DepthZeroDegenerate: return "DepthZeroDegenerate";
    case ErrorCode::PatternNotYSet: return "PatternNotYSet";
    case ErrorCode::WellDefinednessViolation: return "WellDefinednessViolation";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::FiberMismatch: return "FiberMismatch";
    case ErrorCode::IndexBeyondFamily: return "IndexBeyondFamily";
    case ErrorCode::BoundaryCoincidence: return "BoundaryCoincidence";
    case ErrorCode::MonotonicityBroken: return "MonotonicityBroken";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::CheckFailed: return "CheckFailed";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries an ErrorCode.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string format_point(const Point& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(p[i]);
  }
  return out + ")";
}

}  // namespace weylpair
