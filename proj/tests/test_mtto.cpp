#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mttokit/mtto.hpp"
#include "support.hpp"

namespace mttokit {
namespace {

using testing::Rng;

double dist(const TrigPoly& f, const TrigPoly& g) { return l2_norm(f - g); }

const MatrixSymbol kDiagZ = MatrixSymbol::monomial(Mat::Identity(2, 2), 1);

TEST(Mtto, SectionThreeMatrix) {
  const ModelSpace ms(MatrixInner::diagonal_monomials({2, 2}));
  const auto op = assemble_mtto(ms, kDiagZ);
  // Basis order (1,0), (z,0), (0,1), (0,z).
  Mat expected = Mat::Zero(4, 4);
  expected(1, 0) = 1.0;
  expected(3, 2) = 1.0;
  EXPECT_EQ((op.matrix - expected).norm(), 0.0);
}

TEST(Mtto, ZeroAndIdentitySymbols) {
  Rng rng(1);
  const MatrixInner theta(rng.unitary(2), {ScalarInner::blaschke({0.4}), ScalarInner::monomial(2)}, rng.unitary(2));
  const ModelSpace ms(theta);
  EXPECT_LT(assemble_mtto(ms, MatrixSymbol(2, 2)).matrix.norm(), 1e-15);
  EXPECT_LT((assemble_mtto(ms, MatrixSymbol::identity(2)).matrix - Mat::Identity(ms.dim(), ms.dim())).norm(), 1e-10);
}

TEST(Mtto, DimensionMismatchRejected) {
  const ModelSpace ms(MatrixInner::diagonal_monomials({2, 2}));
  EXPECT_THROW(assemble_mtto(ms, MatrixSymbol::identity(3)), InputError);
}

TEST(Mtto, LinearInSymbol) {
  Rng rng(2);
  const ModelSpace ms(MatrixInner::diagonal_monomials({3, 1, 2}));
  const MatrixSymbol G1 = rng.symbol(3, -2, 2);
  const MatrixSymbol G2 = rng.symbol(3, -1, 3);
  const Mat sum = assemble_mtto(ms, G1 + G2).matrix;
  EXPECT_LT((sum - assemble_mtto(ms, G1).matrix - assemble_mtto(ms, G2).matrix).norm(), 1e-12);
}

TEST(Mtto, AnalyticSymbolMatchesToeplitzCompression) {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const std::vector<int> powers = {rng.integer(1, 4), rng.integer(0, 4)};
    const ModelSpace ms(MatrixInner::diagonal_monomials(powers));
    const MatrixSymbol G = rng.symbol(2, 0, 3);
    // Full lower-triangular block Toeplitz matrix of G on degrees 0..D, compressed to the
    // coordinates e_i z^j with j < k_i.
    const int D = 4;
    const PolyWindow w{2, 0, D};
    Mat T = Mat::Zero(w.size(), w.size());
    for (int r = 0; r <= D; ++r) {
      for (int c = 0; c <= r; ++c) T.block(2 * r, 2 * c, 2, 2) = G.coeff(r - c);
    }
    std::vector<Index> idx;
    for (const auto& e : ms.basis().vectors) {
      const Vec v = w.coords(e);
      Index i = 0;
      v.cwiseAbs().maxCoeff(&i);
      idx.push_back(i);
    }
    const Index d = static_cast<Index>(idx.size());
    Mat C(d, d);
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) C(i, j) = T(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    EXPECT_LT((assemble_mtto(ms, G).matrix - C).norm(), 1e-10);
  }
}

TEST(Mtto, SectionThreeKernel) {
  const ModelSpace ms(MatrixInner::diagonal_monomials({2, 2}));
  const auto op = assemble_mtto(ms, kDiagZ);
  const auto ker = kernel(op);
  ASSERT_EQ(ker.dim(), 2);
  const PolySubspace fs = kernel_subspace(ms, ker);
  const PolySubspace expected =
      PolySubspace::from_functions(fs.window, {TrigPoly::unit(2, 0, 1), TrigPoly::unit(2, 1, 1)});
  EXPECT_LT(max_principal_angle(fs.space.basis, expected.space.basis), 1e-12);
}

TEST(Mtto, IdentityHasTrivialKernel) {
  const ModelSpace ms(MatrixInner::diagonal_monomials({2, 3}));
  EXPECT_EQ(kernel(assemble_mtto(ms, MatrixSymbol::identity(2))).dim(), 0);
}

// Column-pivoted reduced row echelon form, then the null space read off the free columns.
Mat rref_null_space(Mat a, double tol) {
  const Index r = a.rows();
  const Index c = a.cols();
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < c && row < r; ++col) {
    Index best = row;
    for (Index i = row; i < r; ++i) {
      if (std::abs(a(i, col)) > std::abs(a(best, col))) best = i;
    }
    if (std::abs(a(best, col)) < tol) continue;
    a.row(row).swap(a.row(best));
    a.row(row) /= a(row, col);
    for (Index i = 0; i < r; ++i) {
      if (i != row) a.row(i) -= a(i, col) * a.row(row);
    }
    pivots.push_back(col);
    ++row;
  }
  std::vector<Index> free;
  for (Index col = 0; col < c; ++col) {
    if (std::find(pivots.begin(), pivots.end(), col) == pivots.end()) free.push_back(col);
  }
  Mat n = Mat::Zero(c, static_cast<Index>(free.size()));
  for (std::size_t j = 0; j < free.size(); ++j) {
    n(free[j], static_cast<Index>(j)) = 1.0;
    for (std::size_t p = 0; p < pivots.size(); ++p) n(pivots[p], static_cast<Index>(j)) = -a(static_cast<Index>(p), free[j]);
  }
  return range_space(n).basis;
}

TEST(Mtto, KernelMatchesRrefOracle) {
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    const Mat a = rng.mat(6, 4) * rng.mat(4, 6);
    OperatorMatrix op;
    op.matrix = a;
    const auto ker = kernel(op);
    ASSERT_EQ(ker.dim(), 2);
    EXPECT_LT(max_principal_angle(ker.basis, rref_null_space(a, 1e-12)), 1e-8);
  }
}

TEST(Mtto, KernelGaugeIsCanonical) {
  Rng rng(5);
  const Mat a = rng.mat(5, 3) * rng.mat(3, 5);
  OperatorMatrix op;
  op.matrix = a;
  const auto k1 = kernel(op);
  const Mat u = rng.unitary(5);
  op.matrix = u * a;
  const auto k2 = kernel(op);
  EXPECT_LT((k1.basis - k2.basis).norm(), 1e-10);
  for (Index j = 0; j < k1.dim(); ++j) {
    Index i = 0;
    while (std::abs(k1.basis(i, j)) < 1e-12) ++i;
    EXPECT_EQ(k1.basis(i, j).imag(), 0.0);
    EXPECT_GT(k1.basis(i, j).real(), 0.0);
  }
}

TEST(Mtto, WitnessSectionThree) {
  const ModelSpace ms(MatrixInner::diagonal_monomials({2, 2}));
  const TrigPoly f1 = TrigPoly::unit(2, 0, 1);
  const TrigPoly f2 = lift_kernel_witness(ms, kDiagZ, f1);
  EXPECT_EQ(dist(f2, -1.0 * TrigPoly::unit(2, 0, 0)), 0.0);
  EXPECT_TRUE((mul(kDiagZ, f1) + ms.apply_theta(f2)).is_zero());
  EXPECT_TRUE(check_kernel_witness(ms, kDiagZ, f1, f2).pass);
  EXPECT_TRUE(lift_kernel_witness(ms, kDiagZ, TrigPoly(2)).is_zero());
  EXPECT_THROW(lift_kernel_witness(ms, kDiagZ, TrigPoly::unit(2, 0, 0)), InputError);
}

TEST(Mtto, WitnessOnRandomKernels) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto inst = testing::random_instance(seed);
    const ModelSpace ms(inst.theta);
    const auto ker = kernel(assemble_mtto(ms, inst.G));
    for (const auto& f1 : kernel_functions(ms, ker)) {
      const TrigPoly f2 = lift_kernel_witness(ms, inst.G, f1);
      EXPECT_TRUE(check_kernel_witness(ms, inst.G, f1, f2).pass) << "seed " << seed;
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Mtto, HankelRelation) {
  const ModelSpace ms(MatrixInner::diagonal_monomials({2, 2}));
  EXPECT_EQ(hankel_relation_check(ms, MatrixSymbol(2, 2)).residual, 0.0);
  EXPECT_LT(hankel_relation_check(ms, kDiagZ).residual, 1e-12);
  EXPECT_THROW(hankel_relation_check(ms, MatrixSymbol::monomial(Mat::Identity(2, 2), -1)), InputError);
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    const auto inst = testing::random_instance(static_cast<std::uint64_t>(t));
    const ModelSpace m(inst.theta);
    const auto r = hankel_relation_check(m, rng.symbol(m.n(), 0, rng.integer(0, 4)));
    EXPECT_LT(r.residual, 1e-10);
    EXPECT_TRUE(r.pass);
  }
}

TEST(Mtto, RankOneTto) {
  const auto z = rank_one_tto(ScalarInner::monomial(1), cplx(0.3, 0.2), 1);
  ASSERT_EQ(z.matrix.rows(), 1);
  EXPECT_LT(std::abs(z.matrix(0, 0) - 1.0), 1e-15);

  const int m = 5;
  const auto op = rank_one_tto(ScalarInner::monomial(m), 1.0, m);
  const auto s = singular_system(op.matrix);
  EXPECT_LT(s.values(1), 1e-12);
  EXPECT_NEAR(op.matrix.trace().real(), m, 1e-12);

  const ScalarInner b = ScalarInner::blaschke({0.3, 0.5});
  const int N = b.minimal_degree();
  const auto r = rank_one_tto(b, 0.0, N);
  const auto basis = b.orthonormal_system(N);
  const TrigPoly k0 = reproducing_kernel(b, 0.0, N);
  Vec c(static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) c(static_cast<Index>(i)) = inner_product(k0, basis[i]);
  EXPECT_LT((r.matrix - c * c.adjoint()).norm(), 1e-10);
  EXPECT_NEAR(r.matrix.trace().real(), l2_norm(k0) * l2_norm(k0), 1e-10);
}

TEST(Mtto, GrowthDiagnostic) {
  std::vector<MatrixInner> family;
  for (int k : {2, 4, 8}) family.push_back(MatrixInner::diagonal_monomials({k}));
  const auto id = boundedness_growth_diagnostic(family, MatrixSymbol::identity(1));
  for (const auto& p : id.points) EXPECT_NEAR(p.sigma_max, 1.0, 1e-12);
  EXPECT_TRUE(id.saturated);
  EXPECT_EQ(id.verdict, "bounded at this scale");
  const auto shift = boundedness_growth_diagnostic(family, MatrixSymbol::monomial(Mat::Identity(1, 1), 1));
  for (const auto& p : shift.points) EXPECT_NEAR(p.sigma_max, 1.0, 1e-12);
}

}  // namespace
}  // namespace mttokit
