#include <gtest/gtest.h>

#include <random>

#include "weylpair/commutant.hpp"
#include "weylpair/weyl_pair.hpp"

using namespace weylpair;

namespace {

std::vector<Point> range1(int a, int b) {
  std::vector<Point> out;
  for (int i = a; i <= b; ++i) out.push_back({i});
  return out;
}

WeylPair canon1(int c, int hi, int k) {
  return build_pspace_pair(validate_pset(range1(c, hi), LatticeWindow::cube(1, 0, hi), SetKind::PSpace), k);
}

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// Kronecker-product oracle: vec(TX - XT) = (X^T (x) I - I (x) X) vec(T), stacked over X and X*,
// nullspace by a full SVD with the same relative cutoff.
Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix oracle_commutant(const std::vector<Matrix>& gens) {
  const Eigen::Index n = gens.front().rows();
  const Matrix id = Matrix::Identity(n, n);
  std::vector<Matrix> all;
  for (const auto& x : gens) {
    all.push_back(x);
    all.push_back(x.adjoint());
  }
  Matrix stacked(static_cast<Eigen::Index>(all.size()) * n * n, n * n);
  for (std::size_t i = 0; i < all.size(); ++i)
    stacked.block(static_cast<Eigen::Index>(i) * n * n, 0, n * n, n * n) =
        kron(all[i].transpose(), id) - kron(id, all[i]);
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  // relative to the largest singular value, floored by the generator scale so that an all-zero
  // map counts as all kernel
  double scale = 0.0;
  for (const auto& x : gens) scale = std::max(scale, x.norm());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-8 * std::max(s(0), 1e-4 * scale)) ++rank;
  return svd.matrixV().rightCols(n * n - rank);
}

double subspace_distance(const std::vector<Matrix>& basis, const Matrix& oracle) {
  return linalg::principal_angle_sine(linalg::vectorize(basis), oracle);
}

// Random representation with known structure: blocks of irreducible dimensions d_i, each
// repeated m_i times, conjugated by a Haar unitary. Commutant dim = sum m_i^2, center = number
// of blocks, generated algebra = sum d_i^2.
struct Planted {
  RepGens rep;
  int commutant = 0, center = 0, algebra = 0;
};

Planted planted(const std::vector<std::pair<int, int>>& blocks, int ngens, std::mt19937_64& rng) {
  int n = 0;
  Planted out;
  for (auto [d, m] : blocks) {
    n += d * m;
    out.commutant += m * m;
    out.algebra += d * d;
  }
  out.center = static_cast<int>(blocks.size());
  const Matrix u = linalg::random_unitary(n, rng);
  std::vector<Matrix> gens;
  for (int g = 0; g < ngens; ++g) {
    Matrix x = Matrix::Zero(n, n);
    int off = 0;
    for (auto [d, m] : blocks) {
      const Matrix b = random_matrix(d, d, rng);
      for (int r = 0; r < m; ++r) {
        x.block(off, off, d, d) = b;
        off += d;
      }
    }
    gens.push_back(u * x * u.adjoint());
  }
  out.rep = RepGens(n, gens);
  return out;
}

}  // namespace

TEST(CommutantBasis, IdentityGivesEverything) {
  for (int n : {1, 3, 5}) EXPECT_EQ(commutant_basis(RepGens(n, {Matrix::Identity(n, n)})).size(), std::size_t(n * n));
}

TEST(CommutantBasis, CanonicalPairs) {
  const auto rep1 = pair_rep_gens(canon1(0, 7, 1), CharacterSampling::Full);
  EXPECT_EQ(rep1.gens.size(), 9u);
  EXPECT_EQ(commutant_basis(rep1).size(), 1u);

  const WeylPair p2 = canon1(0, 7, 2);
  const auto basis = commutant_basis(pair_rep_gens(p2, CharacterSampling::Full));
  ASSERT_EQ(basis.size(), 4u);
  // every element is I_8 (x) M for a 2 x 2 matrix M on the multiplicity space
  for (const auto& t : basis) {
    const Matrix m = t.block(0, 0, 2, 2);
    for (int y = 0; y < 8; ++y)
      for (int z = 0; z < 8; ++z) {
        const Matrix expect = y == z ? m : Matrix::Zero(2, 2);
        EXPECT_LE((t.block(2 * y, 2 * z, 2, 2) - expect).norm(), 1e-9);
      }
  }
}

TEST(CommutantBasis, FullMatrixAlgebraIsIrreducible) {
  const int n = 4;
  std::vector<Matrix> units;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      units.push_back(e);
    }
  const auto s = summarize(RepGens(n, units));
  EXPECT_EQ(s.commutant_dim, 1);
  EXPECT_TRUE(s.is_irreducible);
  EXPECT_EQ(s.bicommutant_dim, n * n);
}

TEST(CommutantBasis, AgreesWithKroneckerOracle) {
  std::mt19937_64 rng(17);
  const std::vector<std::vector<std::pair<int, int>>> shapes{
      {{1, 3}}, {{2, 1}, {1, 2}}, {{3, 1}}, {{1, 1}, {1, 1}, {2, 2}}, {{2, 2}}, {{1, 4}, {2, 1}}};
  for (const auto& shape : shapes) {
    const auto p = planted(shape, 2, rng);
    const auto basis = commutant_basis(p.rep);
    const Matrix oracle = oracle_commutant(p.rep.gens);
    ASSERT_EQ(static_cast<int>(basis.size()), p.commutant);
    EXPECT_EQ(oracle.cols(), p.commutant);
    EXPECT_LE(subspace_distance(basis, oracle), 1e-8);
    // basis is Frobenius-orthonormal
    const Matrix vec = linalg::vectorize(basis);
    EXPECT_LE((vec.adjoint() * vec - Matrix::Identity(vec.cols(), vec.cols())).norm(), 1e-9);
  }
}

TEST(CommutantBasis, PairsAgreeWithKroneckerOracle) {
  std::mt19937_64 rng(8);
  const auto w = LatticeWindow::cube(2, 0, 2);
  const auto all = enumerate_pspaces(w);
  for (int t = 0; t < 6; ++t) {
    const auto& a = all[static_cast<std::size_t>(5 * t + 3) % all.size()];
    const auto& b = all[static_cast<std::size_t>(11 * t + 1) % all.size()];
    const WeylPair p = conjugate_fibers(direct_sum({build_pspace_pair(a, 1), build_pspace_pair(b, 1)}), rng);
    if (p.dim() > 14) continue;
    const auto rep = pair_rep_gens(p);
    EXPECT_LE(subspace_distance(commutant_basis(rep), oracle_commutant(rep.gens)), 1e-8);
  }
}

TEST(Summarize, PlantedStructure) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    std::uniform_int_distribution<int> nb(1, 3), dd(1, 3), mm(1, 3);
    std::vector<std::pair<int, int>> shape;
    const int blocks = nb(rng);
    for (int b = 0; b < blocks; ++b) shape.emplace_back(dd(rng), mm(rng));
    const auto p = planted(shape, 2, rng);
    const auto s = summarize(p.rep);
    EXPECT_EQ(s.commutant_dim, p.commutant);
    EXPECT_EQ(s.center_dim, p.center);
    EXPECT_EQ(s.bicommutant_dim, p.algebra);
    EXPECT_EQ(s.is_factor, p.center == 1);
    EXPECT_EQ(s.is_irreducible, p.commutant == 1);
    EXPECT_LE(s.center_dim, s.commutant_dim);
  }
}

TEST(Summarize, CanonicalPairsAreFactors) {
  for (int k = 1; k <= 3; ++k) {
    const auto s = summarize(pair_rep_gens(canon1(0, 7, k)));
    EXPECT_EQ(s.commutant_dim, k * k);
    EXPECT_TRUE(s.is_factor);
    EXPECT_EQ(s.is_irreducible, k == 1);
    EXPECT_EQ(s.bicommutant_dim, 64);
  }
  const auto sum = summarize(pair_rep_gens(direct_sum({canon1(0, 7, 1), canon1(1, 7, 1)})));
  EXPECT_FALSE(sum.is_factor);
  EXPECT_EQ(sum.center_dim, 2);
  EXPECT_EQ(sum.central_blocks.size(), 2u);
}

TEST(Summarize, WedderburnCountMatchesDirectBicommutant) {
  std::mt19937_64 rng(31);
  for (const auto& shape : std::vector<std::vector<std::pair<int, int>>>{{{2, 2}}, {{1, 2}, {2, 1}}, {{3, 1}, {1, 1}}}) {
    const auto p = planted(shape, 2, rng);
    EXPECT_EQ(static_cast<int>(bicommutant_basis(p.rep).size()), summarize(p.rep).bicommutant_dim);
  }
}

TEST(CommutantProperties, AlgebraAdjointAndInflation) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 8; ++trial) {
    const auto p = planted({{1 + trial % 2, 2}, {2, 1}}, 2, rng);
    const auto c = commutant_basis(p.rep);
    for (const auto& x : c) {
      EXPECT_LE(expand_in_basis(c, x.adjoint()).second, 1e-8);
      for (const auto& y : c) EXPECT_LE(expand_in_basis(c, x * y).second, 1e-8 * std::max(1.0, (x * y).norm()));
    }
    const auto bi = bicommutant_basis(p.rep);
    for (const auto& g : p.rep.gens) EXPECT_LE(expand_in_basis(bi, g).second, 1e-8 * g.norm());
    const Matrix id = Matrix::Identity(p.rep.dim, p.rep.dim);
    EXPECT_LE(expand_in_basis(bi, id).second, 1e-8);
  }
}

TEST(CommutantBasis, DimensionGuard) {
  try {
    commutant_basis(RepGens(300, {Matrix::Identity(300, 300)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionGuard);
  }
  EngineOptions small;
  small.guard = 4;
  EXPECT_THROW(commutant_basis(RepGens(5, {Matrix::Identity(5, 5)}), small), Error);
}

TEST(Intertwiners, Examples) {
  const auto rep = pair_rep_gens(canon1(2, 7, 1));
  const auto self = intertwiners(rep, rep);
  const Matrix id = Matrix::Identity(rep.dim, rep.dim);
  EXPECT_LE(expand_in_basis(self, id).second, 1e-9);

  // A = {3..7} and A + 1 = {4..7}: the U generators alone share positions, the full pair does not
  const WeylPair a = canon1(3, 7, 1), b = canon1(4, 7, 1);
  EXPECT_GT(intertwiners(pair_U_gens(a), pair_U_gens(b)).size(), 0u);
  EXPECT_EQ(intertwiners(pair_rep_gens(a), pair_rep_gens(b)).size(), 0u);

  const WeylPair two = canon1(2, 7, 2);
  const WeylPair sum = direct_sum({canon1(2, 7, 1), canon1(2, 7, 1)});
  const auto tw = intertwiners(pair_rep_gens(sum), pair_rep_gens(two));
  EXPECT_EQ(tw.size(), 4u);
  EXPECT_TRUE(unitarily_equivalent(pair_rep_gens(sum), pair_rep_gens(two)).equivalent);
}

TEST(Intertwiners, LabelMismatch) {
  const auto ra = pair_rep_gens(canon1(2, 7, 1));
  auto rb = ra;
  rb.labels[0] = "other";
  try {
    intertwiners(ra, rb);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LabelMismatch);
  }
}

TEST(UnitarilyEquivalent, Examples) {
  const auto r = pair_rep_gens(canon1(0, 7, 2));
  const auto same = unitarily_equivalent(r, r);
  ASSERT_TRUE(same.equivalent);
  // witness is a unitary in the commutant; for k = 1 it is a phase times the identity
  const auto r1 = pair_rep_gens(canon1(0, 7, 1));
  const auto one = unitarily_equivalent(r1, r1);
  ASSERT_TRUE(one.equivalent);
  const Matrix& w = *one.witness;
  EXPECT_LE((w - w(0, 0) * Matrix::Identity(8, 8)).norm(), 1e-9);
  EXPECT_NEAR(std::abs(w(0, 0)), 1.0, 1e-12);

  EXPECT_FALSE(unitarily_equivalent(r1, pair_rep_gens(canon1(1, 7, 1))).equivalent);
}

TEST(UnitarilyEquivalent, RecoversRandomConjugation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const WeylPair p = direct_sum({canon1(trial % 3, 6, 1), canon1(2, 6, 1 + trial % 2)});
    const auto ra = pair_rep_gens(p);
    const Matrix u = linalg::random_unitary(ra.dim, rng);
    RepGens rb = ra;
    for (auto& g : rb.gens) g = u * g * u.adjoint();
    const auto eq = unitarily_equivalent(ra, rb);
    ASSERT_TRUE(eq.equivalent);
    const Matrix& w = *eq.witness;
    EXPECT_LE((w.adjoint() * w - Matrix::Identity(ra.dim, ra.dim)).norm(), 1e-9);
    for (std::size_t i = 0; i < ra.gens.size(); ++i) EXPECT_LE((w * ra.gens[i] * w.adjoint() - rb.gens[i]).norm(), 1e-8);
  }
}

// Between irreducibles, equivalence holds exactly when the intertwiner space is one-dimensional
// and spanned by a multiple of a unitary.
TEST(UnitarilyEquivalent, SchurConsistency) {
  const auto w = LatticeWindow::cube(1, 0, 5);
  const auto all = enumerate_pspaces(w);
  std::mt19937_64 rng(2);
  for (const auto& a : all)
    for (const auto& b : all) {
      const auto ra = pair_rep_gens(build_pspace_pair(a, 1));
      const auto rb = pair_rep_gens(conjugate_fibers(build_pspace_pair(b, 1), rng));
      const auto eq = unitarily_equivalent(ra, rb);
      if (ra.dim != rb.dim) {
        EXPECT_FALSE(eq.equivalent);
        continue;
      }
      const auto tw = intertwiners(ra, rb);
      bool schur = tw.size() == 1;
      if (schur) {
        const Matrix t = tw[0] * std::sqrt(static_cast<double>(ra.dim));
        schur = (t.adjoint() * t - Matrix::Identity(ra.dim, ra.dim)).norm() <= 1e-8;
      }
      EXPECT_EQ(eq.equivalent, schur);
      EXPECT_EQ(eq.equivalent, a == b);
    }
}
