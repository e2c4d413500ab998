#include <gtest/gtest.h>

#include <map>
#include <random>

#include "weylpair/counterexample.hpp"
#include "weylpair/dilation.hpp"

using namespace weylpair;

namespace {

using Multiset = std::map<std::vector<Point>, int>;

Multiset recovered(const Decomposition& d) {
  Multiset out;
  for (const auto& c : d.components) out[c.pspace.points()] += c.multiplicity;
  return out;
}

}  // namespace

TEST(Decompose, CanonicalInputIsReturned) {
  const auto w = LatticeWindow::cube(1, 0, 7);
  const PSet a = upset_generated(w, {{3}});
  const auto d = decompose(build_pspace_pair(a, 2));
  ASSERT_EQ(d.components.size(), 1u);
  EXPECT_EQ(d.components[0].pspace, a);
  EXPECT_EQ(d.components[0].multiplicity, 2);
  EXPECT_EQ(d.components[0].translation, Point{-3});
  EXPECT_EQ(d.components[0].normalized, (std::vector<Point>{{0}, {1}, {2}, {3}, {4}}));
  EXPECT_TRUE(d.reassembly_equivalent);
}

TEST(Decompose, TwoTails) {
  const auto w = LatticeWindow::cube(1, 0, 7);
  const PSet a = upset_generated(w, {{0}}), b = upset_generated(w, {{1}});
  std::mt19937_64 rng(1);
  const auto d = decompose(conjugate_fibers(direct_sum({build_pspace_pair(a, 1), build_pspace_pair(b, 1)}), rng));
  EXPECT_EQ(recovered(d), (Multiset{{a.points(), 1}, {b.points(), 1}}));
  EXPECT_TRUE(d.reassembly_equivalent);
  EXPECT_LE(d.reassembly_residual, 1e-8);
}

// Round-trip oracle: the multiset put in is the multiset that comes out, up to the merging of
// equal P-spaces (their multiplicities add).
TEST(Decompose, RandomSumsRoundTrip) {
  std::mt19937_64 rng(2024);
  const std::vector<LatticeWindow> windows{LatticeWindow::cube(1, 0, 7), LatticeWindow::cube(2, 0, 3)};
  for (int trial = 0; trial < 10; ++trial) {
    const auto& w = windows[static_cast<std::size_t>(trial) % 2];
    const auto all = enumerate_pspaces(w);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    std::uniform_int_distribution<int> count(1, 3), mult(1, 3);
    Multiset expect;
    std::vector<WeylPair> parts;
    int dim = 0;
    const int n = count(rng);
    for (int c = 0; c < n; ++c) {
      const PSet& a = all[pick(rng)];
      const int k = mult(rng);
      if (dim + static_cast<int>(a.size()) * k > 60) continue;
      dim += static_cast<int>(a.size()) * k;
      expect[a.points()] += k;
      parts.push_back(build_pspace_pair(a, k));
    }
    if (parts.empty()) continue;
    const WeylPair input = conjugate_fibers(direct_sum(parts), rng);
    const auto d = decompose(input);
    EXPECT_EQ(recovered(d), expect) << "trial " << trial;
    EXPECT_TRUE(d.reassembly_equivalent) << "trial " << trial;
    for (const auto& c : d.components) {
      // normalization puts the componentwise minimum at the window's lower corner
      const auto shifted = translate_pset(c.pspace, c.translation);
      EXPECT_EQ(shifted.points, c.normalized);
      Point lo = c.normalized.front();
      for (const auto& p : c.normalized)
        for (std::size_t i = 0; i < lo.size(); ++i) lo[i] = std::min(lo[i], p[i]);
      EXPECT_EQ(lo, w.lo());
    }
  }
}

TEST(Decompose, RejectsNonCommutingRanges) {
  const WeylPair r2 =
      build_r2_pair(demo_family(), EvaluationPoint{}, GridSpec{2, 4.0, std::nullopt}, LatticeWindow({0, 0}, {5, 5}));
  try {
    decompose(r2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotCommuting);
  }
}

// Fibers (1, 2, 1): V enters the middle block along u and leaves it along r, with u and r
// neither parallel nor orthogonal. The algebra is irreducible, yet the middle fiber is 2.
TEST(Decompose, FiberMismatch) {
  const auto w = LatticeWindow::cube(1, 0, 2);
  const double h = std::sqrt(0.5);
  std::vector<Eigen::Triplet<Complex>> trips{{1, 0, 1.0}, {3, 1, h}, {3, 2, h}};
  SparseMatrix v(4, 4);
  v.setFromTriplets(trips.begin(), trips.end());
  const WeylPair odd(w, {1, 2, 1}, {v}, "mismatch");
  try {
    decompose(odd);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FiberMismatch);
  }
}
