#pragma once

// Discrete model of G = Z^d and P = N^d on a finite window: P-spaces (up-sets),
// Y-sets (down-sets), their enumeration and translation, and the separating
// functionals f~(A) = weight * sum_{x in A} f(x).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "weylpair/types.hpp"

namespace weylpair {

class LatticeWindow {
 public:
  LatticeWindow() = default;

  LatticeWindow(Point lo, Point hi, double weight = 1.0)
      : lo_(std::move(lo)), hi_(std::move(hi)), weight_(weight) {
    if (lo_.empty() || lo_.size() != hi_.size())
      throw Error(ErrorCode::InvalidArgument, "window corners must have equal positive dimension");
    for (std::size_t i = 0; i < lo_.size(); ++i)
      if (lo_[i] > hi_[i]) throw Error(ErrorCode::InvalidArgument, "window needs lo <= hi");
    if (!(weight_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "window weight must be positive");
  }

  /// The box {lo..hi}^dim.
  static LatticeWindow cube(int dim, int lo, int hi, double weight = 1.0) {
    return LatticeWindow(Point(static_cast<std::size_t>(dim), lo),
                         Point(static_cast<std::size_t>(dim), hi), weight);
  }

  int dim() const { return static_cast<int>(lo_.size()); }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  double weight() const { return weight_; }
  int side(int axis) const { return hi_[axis] - lo_[axis] + 1; }

  std::size_t cardinality() const {
    std::size_t n = 1;
    for (int i = 0; i < dim(); ++i) n *= static_cast<std::size_t>(side(i));
    return n;
  }

  bool contains(const Point& p) const {
    if (p.size() != lo_.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
    return true;
  }

  /// Row-major index; lexicographic order of points equals index order.
  std::size_t index_of(const Point& p) const {
    std::size_t idx = 0;
    for (int i = 0; i < dim(); ++i)
      idx = idx * static_cast<std::size_t>(side(i)) + static_cast<std::size_t>(p[i] - lo_[i]);
    return idx;
  }

  Point point_at(std::size_t idx) const {
    Point p(lo_.size());
    for (int i = dim() - 1; i >= 0; --i) {
      const auto s = static_cast<std::size_t>(side(i));
      p[i] = lo_[i] + static_cast<int>(idx % s);
      idx /= s;
    }
    return p;
  }

  std::vector<Point> points() const {
    std::vector<Point> out;
    out.reserve(cardinality());
    for (std::size_t i = 0; i < cardinality(); ++i) out.push_back(point_at(i));
    return out;
  }

  LatticeWindow shifted(const Point& offset) const {
    Point lo = lo_, hi = hi_;
    for (int i = 0; i < dim(); ++i) {
      lo[i] += offset[i];
      hi[i] += offset[i];
    }
    return LatticeWindow(lo, hi, weight_);
  }

  bool operator==(const LatticeWindow& o) const {
    return lo_ == o.lo_ && hi_ == o.hi_ && weight_ == o.weight_;
  }

 private:
  Point lo_{0};
  Point hi_{0};
  double weight_ = 1.0;
};

inline Point add(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Point subtract(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Point unit(int dim, int axis, int scale = 1) {
  Point e(static_cast<std::size_t>(dim), 0);
  e[axis] = scale;
  return e;
}

/// Componentwise order x <= y (y - x in P).
inline bool leq(const Point& x, const Point& y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > y[i]) return false;
  return true;
}

inline bool nonnegative(const Point& a) {
  return std::all_of(a.begin(), a.end(), [](int v) { return v >= 0; });
}

inline int sup_norm(const Point& a) {
  int m = 0;
  for (int v : a) m = std::max(m, v < 0 ? -v : v);
  return m;
}

/// All points of the box [lo, hi] (componentwise) in lexicographic order.
inline std::vector<Point> box_points(const Point& lo, const Point& hi) {
  return LatticeWindow(lo, hi).points();
}

enum class SetKind { PSpace, YSet };

inline const char* to_string(SetKind k) { return k == SetKind::PSpace ? "pspace" : "yset"; }

/// Reported by validate_pset with the first offending (x, e_i) pair.
class InvarianceViolation : public Error {
 public:
  InvarianceViolation(Point x, int axis, int direction)
      : Error(ErrorCode::InvarianceViolation,
              "point " + format_point(x) + (direction > 0 ? " + e" : " - e") +
                  std::to_string(axis) + " missing from the set"),
        point(std::move(x)),
        axis(axis),
        direction(direction) {}

  Point point;
  int axis;
  int direction;
};

/// A nonempty finite subset of a window, invariant under +e_i (PSpace) or -e_i (YSet)
/// relative to the window. Only obtainable through validate_pset.
class PSet {
 public:
  const LatticeWindow& window() const { return window_; }
  const std::vector<Point>& points() const { return points_; }
  SetKind kind() const { return kind_; }
  std::size_t size() const { return points_.size(); }

  bool contains(const Point& p) const {
    return window_.contains(p) && mask_[window_.index_of(p)] != 0;
  }

  /// Membership in X_u: the origin belongs to the set.
  bool contains_origin() const { return contains(Point(static_cast<std::size_t>(window_.dim()), 0)); }

  /// Componentwise minimum over the points.
  Point lower_corner() const {
    Point m = points_.front();
    for (const auto& p : points_)
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], p[i]);
    return m;
  }

  bool operator==(const PSet& o) const {
    return kind_ == o.kind_ && window_ == o.window_ && points_ == o.points_;
  }

 private:
  PSet(LatticeWindow window, std::vector<Point> points, SetKind kind)
      : window_(std::move(window)), points_(std::move(points)), kind_(kind) {
    mask_.assign(window_.cardinality(), 0);
    for (const auto& p : points_) mask_[window_.index_of(p)] = 1;
  }

  friend PSet validate_pset(std::vector<Point> points, const LatticeWindow& window, SetKind kind);

  LatticeWindow window_;
  std::vector<Point> points_;
  SetKind kind_;
  std::vector<unsigned char> mask_;
};

inline PSet validate_pset(std::vector<Point> points, const LatticeWindow& window, SetKind kind) {
  for (const auto& p : points)
    if (!window.contains(p))
      throw Error(ErrorCode::InvalidArgument, "point " + format_point(p) + " outside window");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.empty()) throw Error(ErrorCode::EmptySet, "a P-set needs at least one point");

  std::vector<unsigned char> mask(window.cardinality(), 0);
  for (const auto& p : points) mask[window.index_of(p)] = 1;
  const int step = kind == SetKind::PSpace ? 1 : -1;
  for (const auto& x : points) {
    for (int axis = 0; axis < window.dim(); ++axis) {
      Point y = x;
      y[axis] += step;
      if (window.contains(y) && !mask[window.index_of(y)]) throw InvarianceViolation(x, axis, step);
    }
  }
  return PSet(window, std::move(points), kind);
}

/// Up-set of the window generated by `generators`: {x : x >= g for some g}.
inline PSet upset_generated(const LatticeWindow& window, const std::vector<Point>& generators) {
  std::vector<Point> pts;
  for (const auto& x : window.points())
    for (const auto& g : generators)
      if (leq(g, x)) {
        pts.push_back(x);
        break;
      }
  return validate_pset(std::move(pts), window, SetKind::PSpace);
}

/// Down-set of the window generated by `generators`: {x : x <= g for some g}.
inline PSet downset_generated(const LatticeWindow& window, const std::vector<Point>& generators) {
  std::vector<Point> pts;
  for (const auto& x : window.points())
    for (const auto& g : generators)
      if (leq(x, g)) {
        pts.push_back(x);
        break;
      }
  return validate_pset(std::move(pts), window, SetKind::YSet);
}

namespace detail {

using Bits = std::vector<unsigned char>;

// Up-sets (including the empty one) of the box with the given side lengths, as membership
// masks in row-major order. A d-dimensional up-set is a chain A_0 <= A_1 <= ... of
// (d-1)-dimensional up-sets indexed by the first coordinate.
inline std::vector<Bits> upsets_of_box(const std::vector<int>& sides, std::uint64_t budget) {
  if (sides.empty()) return {Bits{0}, Bits{1}};
  const std::vector<int> rest(sides.begin() + 1, sides.end());
  const std::vector<Bits> sub = upsets_of_box(rest, budget);
  const std::size_t m = sub.size();
  const std::size_t slice = sub.front().size();
  const int len = sides.front();

  // Cheap refusal before the quadratic superset table. The lex tails of the slice are slice+1
  // nested up-sets, and multichains of length len in them already number C(slice+len, len).
  double lower = 1.0;
  for (int c = 1; c <= len; ++c) lower = lower * static_cast<double>(slice + static_cast<std::size_t>(c)) / c;
  if (lower > static_cast<double>(budget) || static_cast<double>(m) * static_cast<double>(m) > 16.0 * static_cast<double>(budget))
    throw Error(ErrorCode::BudgetExceeded, "up-set count of the window exceeds enumeration budget");

  std::vector<std::vector<std::size_t>> supersets(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      bool inc = true;
      for (std::size_t k = 0; k < slice && inc; ++k)
        if (sub[i][k] && !sub[j][k]) inc = false;
      if (inc) supersets[i].push_back(j);
    }

  // Count chains before materialising them.
  std::vector<double> ways(m, 1.0);
  for (int c = 1; c < len; ++c) {
    std::vector<double> next(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j : supersets[i]) next[j] += ways[i];
    ways = std::move(next);
  }
  double total = 0.0;
  for (double w : ways) total += w;
  if (total > static_cast<double>(budget))
    throw Error(ErrorCode::BudgetExceeded,
                "up-set count " + std::to_string(static_cast<long double>(total)) +
                    " exceeds enumeration budget");

  std::vector<Bits> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> chain(static_cast<std::size_t>(len));
  auto emit = [&](auto&& self, int c) -> void {
    if (c == len) {
      Bits bits(static_cast<std::size_t>(len) * slice);
      for (int s = 0; s < len; ++s)
        std::copy(sub[chain[s]].begin(), sub[chain[s]].end(),
                  bits.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(s) * slice));
      out.push_back(std::move(bits));
      return;
    }
    if (c == 0) {
      for (std::size_t j = 0; j < m; ++j) {
        chain[0] = j;
        self(self, 1);
      }
      return;
    }
    for (std::size_t j : supersets[chain[c - 1]]) {
      chain[c] = j;
      self(self, c + 1);
    }
  };
  emit(emit, 0);
  return out;
}

}  // namespace detail

/// Every nonempty P-space (up-set) of the window, sorted lexicographically by point list.
inline std::vector<PSet> enumerate_pspaces(const LatticeWindow& window,
                                           std::uint64_t budget = std::uint64_t{1} << 24) {
  std::vector<int> sides;
  for (int i = 0; i < window.dim(); ++i) sides.push_back(window.side(i));
  const auto masks = detail::upsets_of_box(sides, budget);
  std::vector<PSet> out;
  out.reserve(masks.size());
  for (const auto& mask : masks) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) pts.push_back(window.point_at(i));
    if (pts.empty()) continue;
    out.push_back(validate_pset(std::move(pts), window, SetKind::PSpace));
  }
  std::sort(out.begin(), out.end(),
            [](const PSet& a, const PSet& b) { return a.points() < b.points(); });
  return out;
}

struct TranslateResult {
  /// A + x restricted to the window.
  std::vector<Point> points;
  /// Number of shifted points that left the window.
  std::size_t clipped = 0;
  /// The shifted set when it is nonempty and still of the same kind.
  std::optional<PSet> set;
};

inline TranslateResult translate_pset(const PSet& a, const Point& x) {
  TranslateResult r;
  for (const auto& p : a.points()) {
    Point q = add(p, x);
    if (a.window().contains(q))
      r.points.push_back(std::move(q));
    else
      ++r.clipped;
  }
  std::sort(r.points.begin(), r.points.end());
  try {
    r.set = validate_pset(r.points, a.window(), a.kind());
  } catch (const Error&) {
  }
  return r;
}

/// x -> lo + hi - x, which maps the window onto itself and swaps the two kinds.
inline PSet reflect_pset(const PSet& a) {
  const auto& w = a.window();
  std::vector<Point> pts;
  for (const auto& p : a.points()) pts.push_back(subtract(add(w.lo(), w.hi()), p));
  return validate_pset(std::move(pts), w, a.kind() == SetKind::PSpace ? SetKind::YSet : SetKind::PSpace);
}

inline std::vector<Point> complement_points(const PSet& a) {
  std::vector<Point> out;
  for (const auto& p : a.window().points())
    if (!a.contains(p)) out.push_back(p);
  return out;
}

/// A finitely supported complex function on a window.
class TestFunction {
 public:
  TestFunction(LatticeWindow window, std::vector<std::pair<Point, Complex>> support)
      : window_(std::move(window)), support_(std::move(support)) {
    for (const auto& [p, v] : support_)
      if (!window_.contains(p))
        throw Error(ErrorCode::InvalidArgument, "support point " + format_point(p) + " outside window");
  }

  static TestFunction delta(const LatticeWindow& window, const Point& x, Complex value = 1.0) {
    return TestFunction(window, {{x, value}});
  }

  const LatticeWindow& window() const { return window_; }
  const std::vector<std::pair<Point, Complex>>& support() const { return support_; }

  TestFunction operator+(const TestFunction& o) const {
    auto s = support_;
    s.insert(s.end(), o.support_.begin(), o.support_.end());
    return TestFunction(window_, std::move(s));
  }

  TestFunction operator*(Complex c) const {
    auto s = support_;
    for (auto& entry : s) entry.second *= c;
    return TestFunction(window_, std::move(s));
  }

 private:
  LatticeWindow window_;
  std::vector<std::pair<Point, Complex>> support_;
};

/// f~(A) = weight * sum_{x in A} f(x).
inline Complex tilde_f(const TestFunction& f, const PSet& a) {
  Complex sum = 0.0;
  for (const auto& [p, v] : f.support())
    if (a.contains(p)) sum += v;
  return a.window().weight() * sum;
}

/// A lattice point whose delta function separates two distinct sets, if any.
inline std::optional<Point> separating_point(const PSet& a, const PSet& b) {
  for (const auto& p : a.window().points())
    if (a.contains(p) != b.contains(p)) return p;
  return std::nullopt;
}

}  // namespace weylpair
