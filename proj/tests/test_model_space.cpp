#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mttokit/model_space.hpp"
#include "mttokit/mtto.hpp"
#include "support.hpp"

namespace mttokit {
namespace {

using testing::Rng;

double dist(const TrigPoly& f, const TrigPoly& g) { return l2_norm(f - g); }

Mat gram(const std::vector<TrigPoly>& v) {
  const Index d = static_cast<Index>(v.size());
  Mat g(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) g(i, j) = inner_product(v[static_cast<std::size_t>(j)], v[static_cast<std::size_t>(i)]);
  }
  return g;
}

TEST(ModelSpace, MonomialSymbol) {
  const auto s = theta_to_symbol(MatrixInner::diagonal_monomials({2, 2}), 2);
  EXPECT_EQ(s.symbol.lo(), 2);
  EXPECT_EQ(s.symbol.hi(), 2);
  EXPECT_LT((s.symbol.coeff(2) - Mat::Identity(2, 2)).norm(), 1e-15);
  EXPECT_EQ(s.tail, 0.0);
}

TEST(ModelSpace, BlaschkeAtZeroIsZ) {
  const MatrixInner theta({ScalarInner::blaschke({0.0})});
  const auto s = theta_to_symbol(theta, 5);
  EXPECT_LT(std::abs(s.symbol.coeff(1)(0, 0) - 1.0), 1e-15);
  EXPECT_LT(std::abs(s.symbol.coeff(0)(0, 0)), 1e-15);
  EXPECT_LT(std::abs(s.symbol.coeff(2)(0, 0)), 1e-15);
}

TEST(ModelSpace, BlaschkeCoefficientsMatchDft) {
  const ScalarInner b = ScalarInner::blaschke({0.5});
  const auto s = theta_to_symbol(MatrixInner({b}), 60);
  const int M = 256;
  for (int k = 0; k <= 60; ++k) {
    cplx c = 0.0;
    for (int j = 0; j < M; ++j) {
      const double t = 2.0 * std::numbers::pi * j / M;
      c += b(std::polar(1.0, t)) * std::polar(1.0, -k * t);
    }
    EXPECT_LT(std::abs(c / static_cast<double>(M) - s.symbol.coeff(k)(0, 0)), 1e-10);
  }
}

TEST(ModelSpace, InsufficientDegreeRejected) {
  const MatrixInner theta({ScalarInner::blaschke({0.9})});
  try {
    theta_to_symbol(theta, 10);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find(std::to_string(ScalarInner::blaschke({0.9}).minimal_degree(kMaxTail))),
              std::string::npos);
  }
}

TEST(ModelSpace, BlaschkeIsUnimodularOnGrid) {
  const ScalarInner b = ScalarInner::blaschke({0.3, cplx(0, 0.5), cplx(-0.2, 0.7)}, std::polar(1.0, 0.4));
  for (int j = 0; j < 64; ++j) EXPECT_NEAR(std::abs(b(std::polar(1.0, 2.0 * std::numbers::pi * j / 64))), 1.0, 1e-10);
}

TEST(ModelSpace, InvalidInnerRejected) {
  EXPECT_THROW(ScalarInner::blaschke({1.2}), InputError);
  EXPECT_THROW(ScalarInner::blaschke({0.2}, 2.0), InputError);
  EXPECT_THROW(ScalarInner::monomial(-1), InputError);
  EXPECT_THROW(MatrixInner(Mat::Ones(2, 2), {ScalarInner::monomial(1), ScalarInner::monomial(1)}, Mat::Identity(2, 2)),
               InputError);
}

TEST(ModelSpace, MonomialBasis) {
  const auto b = model_basis(MatrixInner::diagonal_monomials({2, 2}), 2);
  ASSERT_EQ(b.vectors.size(), 4u);
  const TrigPoly expected[] = {TrigPoly::unit(2, 0, 0), TrigPoly::unit(2, 0, 1), TrigPoly::unit(2, 1, 0),
                               TrigPoly::unit(2, 1, 1)};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(dist(b.vectors[i], expected[i]), 0.0);
  EXPECT_EQ(b.tail_bound, 0.0);
  const auto z = model_basis(MatrixInner::diagonal_monomials({1}), 1);
  ASSERT_EQ(z.vectors.size(), 1u);
  EXPECT_EQ(dist(z.vectors[0], TrigPoly::scalar(0, {1.0})), 0.0);
}

TEST(ModelSpace, BlaschkeBasisMatchesGramSchmidtOfCauchyKernels) {
  const std::vector<cplx> zeros = {0.3, cplx(0, 0.5)};
  const ModelSpace ms(MatrixInner({ScalarInner::blaschke(zeros)}));
  ASSERT_EQ(ms.dim(), 2);
  const int N = ms.N();
  std::vector<TrigPoly> gs;
  for (cplx a : zeros) {
    std::vector<cplx> c(static_cast<std::size_t>(N + 1));
    cplx p = 1.0;
    for (auto& ck : c) {
      ck = p;
      p *= std::conj(a);
    }
    TrigPoly k = TrigPoly::scalar(0, c);
    for (const auto& e : gs) k -= inner_product(k, e) * e;
    gs.push_back((1.0 / l2_norm(k)) * k);
  }
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_NEAR(std::abs(inner_product(ms.basis().vectors[j], gs[j])), 1.0, 1e-9);
  }
}

TEST(ModelSpace, BasisIsOrthonormalAndInsideModelSpace) {
  const std::vector<MatrixInner> thetas = {
      MatrixInner::diagonal_monomials({3, 0, 2}),
      MatrixInner({ScalarInner::blaschke({0.4, cplx(-0.3, 0.2)}), ScalarInner::monomial(2)}),
      MatrixInner(Rng(3).unitary(2), {ScalarInner::blaschke({cplx(0.1, 0.6)}), ScalarInner::monomial(1)},
                  Rng(4).unitary(2)),
  };
  for (const auto& theta : thetas) {
    const ModelSpace ms(theta);
    const auto& v = ms.basis().vectors;
    EXPECT_EQ(ms.dim(), theta.model_dim());
    EXPECT_LT((gram(v) - Mat::Identity(ms.dim(), ms.dim())).norm(), 1e-10);
    for (const auto& e : v) EXPECT_LE(l2_norm(ms.project_theta_h2(e)), ms.tail() + 1e-10);
  }
}

TEST(ModelSpace, ProjectionExamples) {
  const ModelSpace ms(MatrixInner::diagonal_monomials({2, 2}));
  const TrigPoly z2 = TrigPoly::unit(2, 0, 2);
  EXPECT_TRUE(ms.project(z2).is_zero());
  EXPECT_EQ(dist(ms.project_theta_h2(z2), z2), 0.0);
  for (const auto& e : ms.basis().vectors) EXPECT_LT(dist(ms.project(e), e), 1e-15);
}

TEST(ModelSpace, ProjectionMatchesOrthonormalExpansion) {
  Rng rng(5);
  const MatrixInner theta(rng.unitary(2), {ScalarInner::blaschke({0.5, cplx(0, -0.3)}), ScalarInner::monomial(3)},
                          rng.unitary(2));
  const ModelSpace ms(theta);
  for (int t = 0; t < 10; ++t) {
    const TrigPoly f = rng.poly(2, 0, 6);
    TrigPoly expansion(2);
    for (const auto& e : ms.basis().vectors) expansion += inner_product(f, e) * e;
    EXPECT_LT(dist(ms.project(f), expansion), 1e-9);
    EXPECT_LT(dist(ms.project(f) + ms.project_theta_h2(f), riesz_plus(f)), 1e-9);
  }
}

TEST(ModelSpace, MatrixInnerIsUnitaryOnCircle) {
  Rng rng(6);
  const MatrixInner theta(rng.unitary(3),
                          {ScalarInner::monomial(1), ScalarInner::blaschke({0.2, 0.7}), ScalarInner::monomial(0)},
                          rng.unitary(3));
  const auto s = theta_to_symbol(theta, theta.auto_degree());
  for (int j = 0; j < 32; ++j) {
    const Mat U = s.symbol(std::polar(1.0, 2.0 * std::numbers::pi * j / 32));
    EXPECT_LT((U * U.adjoint() - Mat::Identity(3, 3)).norm(), 1e-9);
  }
}

TEST(ModelSpace, ReproducingKernelExamples) {
  const ScalarInner z3 = ScalarInner::monomial(3);
  EXPECT_EQ(dist(reproducing_kernel(z3, 0.0, 3), TrigPoly::scalar(0, {1.0})), 0.0);
  EXPECT_EQ(dist(reproducing_kernel(z3, 1.0, 3), TrigPoly::scalar(0, {1.0, 1.0, 1.0})), 0.0);
  const ScalarInner b = ScalarInner::blaschke({0.5});
  const int N = b.minimal_degree();
  const TrigPoly k = reproducing_kernel(b, 0.2, N);
  EXPECT_LT(std::abs(inner_product(k, k) - k(0.2)(0)), 1e-9);
  EXPECT_THROW(reproducing_kernel(b, 1.5, N), InputError);
}

TEST(ModelSpace, ReproducingProperty) {
  const ScalarInner b = ScalarInner::blaschke({0.3, cplx(-0.4, 0.4), cplx(0, 0.6)});
  const int N = b.minimal_degree();
  const auto basis = b.orthonormal_system(N);
  for (cplx zeta : {cplx(0.1, 0.2), cplx(-0.5, 0.3), cplx(0.0, 0.0)}) {
    const TrigPoly k = reproducing_kernel(b, zeta, N);
    for (const auto& f : basis) EXPECT_LT(std::abs(inner_product(f, k) - f(zeta)(0)), 1e-8);
  }
  const cplx zeta = std::polar(1.0, 0.9);
  const TrigPoly k = reproducing_kernel(b, zeta, N);
  for (const auto& f : basis) EXPECT_LT(std::abs(inner_product(f, k) - f(zeta)(0)), 1e-8 + 10 * b.tail_bound(N));
}

TEST(LpDiagnostic, GeometricZerosConverge) {
  const ZeroSequence zeros = [](std::size_t k) { return PolarZero{std::ldexp(1.0, -static_cast<int>(k)), 0.0}; };
  for (double p : {1.0, 2.0, 3.0, 6.0}) {
    const auto d = lp_membership_diagnostic(zeros, -1.0, p, 1000);
    EXPECT_EQ(d.verdict, SeriesVerdict::converging) << "p=" << p;
    ASSERT_TRUE(d.tail_estimate.has_value());
  }
}

TEST(LpDiagnostic, FiniteZerosConverge) {
  const auto d = lp_membership_diagnostic(std::vector<cplx>{0.5, cplx(0, 0.9)}, 1.0, 4.0);
  EXPECT_EQ(d.verdict, SeriesVerdict::converging);
  const double direct = 0.75 / std::pow(0.5, 4) + (1 - 0.81) / std::pow(std::abs(1.0 - cplx(0, 0.9)), 4);
  EXPECT_NEAR(d.partial_sums.back(), direct, 1e-12 * direct);
}

TEST(LpDiagnostic, CriticalSequencePartialSumsAreMonotone) {
  const auto d = lp_membership_diagnostic(critical_zero_sequence(), 1.0, 2.0, 4096);
  ASSERT_EQ(d.partial_sums.size(), 4u);
  for (std::size_t i = 1; i < d.partial_sums.size(); ++i) EXPECT_GT(d.partial_sums[i], d.partial_sums[i - 1]);
  EXPECT_NE(d.verdict, SeriesVerdict::diverging_trend);
}

TEST(LpDiagnostic, ConstantTermsShowDivergingTrend) {
  const ZeroSequence zeros = [](std::size_t) { return PolarZero{0.5, std::numbers::pi}; };
  const auto d = lp_membership_diagnostic(zeros, 1.0, 2.0, 1 << 14);
  EXPECT_EQ(d.verdict, SeriesVerdict::diverging_trend);
  EXPECT_FALSE(d.tail_estimate.has_value());
}

TEST(LpDiagnostic, InvalidInputRejected) {
  EXPECT_THROW(lp_membership_diagnostic(critical_zero_sequence(), 1.0, 2.0, 5), InputError);
  EXPECT_THROW(lp_membership_diagnostic(critical_zero_sequence(), 0.5, 2.0, 100), InputError);
}

}  // namespace
}  // namespace mttokit
