#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mttokit/fourier.hpp"
#include "support.hpp"

namespace mttokit {
namespace {

using testing::Rng;

double coeff_distance(const TrigPoly& f, const TrigPoly& g) { return l2_norm(f - g); }

TEST(Fourier, MulByIdentityIsIdentity) {
  Rng rng(1);
  const TrigPoly f = rng.poly(2, -2, 3);
  EXPECT_EQ(coeff_distance(mul(MatrixSymbol::identity(2), f), f), 0.0);
}

TEST(Fourier, MulByDiagonalShift) {
  const MatrixSymbol G = MatrixSymbol::monomial(Mat::Identity(2, 2), 1);
  const TrigPoly f = TrigPoly::unit(2, 0, 0) + TrigPoly::unit(2, 1, 1);
  const TrigPoly expected = TrigPoly::unit(2, 0, 1) + TrigPoly::unit(2, 1, 2);
  EXPECT_EQ(coeff_distance(mul(G, f), expected), 0.0);
}

TEST(Fourier, MulWindowIsSumOfWindows) {
  Rng rng(2);
  const MatrixSymbol G = rng.symbol(2, -1, 2);
  const TrigPoly f = rng.poly(2, 1, 3);
  const TrigPoly g = mul(G, f);
  EXPECT_EQ(g.lo(), 0);
  EXPECT_EQ(g.hi(), 5);
}

TEST(Fourier, MulMatchesGridOracle) {
  Rng rng(3);
  const MatrixSymbol G = rng.symbol(3, 0, 3);
  const TrigPoly f = rng.poly(3, 0, 4);
  const TrigPoly g = mul(G, f);
  const int M = 16;
  const auto fv = evaluate_on_grid(f, M);
  std::vector<Vec> prod;
  for (int j = 0; j < M; ++j) {
    const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * j / M);
    prod.push_back(G(z) * fv[static_cast<std::size_t>(j)]);
  }
  EXPECT_LT(coeff_distance(from_grid_values(prod, 0, 7), g), 1e-12);
}

TEST(Fourier, MulDimensionMismatchRejected) {
  Rng rng(4);
  EXPECT_THROW(mul(rng.symbol(2, 0, 1), rng.poly(3, 0, 1)), InputError);
}

TEST(Fourier, RieszExamples) {
  const TrigPoly f = TrigPoly::scalar(-1, {1.0, 2.0, 3.0});
  const TrigPoly p = riesz_plus(f);
  EXPECT_EQ(p.lo(), 0);
  EXPECT_EQ(coeff_distance(p, TrigPoly::scalar(0, {2.0, 3.0})), 0.0);
  EXPECT_TRUE(riesz_minus0(TrigPoly::scalar(0, {cplx(4.0, -1.0)})).is_zero());
}

TEST(Fourier, RieszProjectionsAlgebra) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const TrigPoly f = rng.poly(2, -rng.integer(0, 4), rng.integer(0, 4));
    const TrigPoly g = rng.poly(2, -rng.integer(0, 4), rng.integer(0, 4));
    EXPECT_EQ(coeff_distance(riesz_plus(f) + riesz_minus0(f), f), 0.0);
    EXPECT_EQ(coeff_distance(riesz_plus(riesz_plus(f)), riesz_plus(f)), 0.0);
    EXPECT_EQ(coeff_distance(riesz_minus0(riesz_minus0(f)), riesz_minus0(f)), 0.0);
    EXPECT_TRUE(riesz_plus(riesz_minus0(f)).is_zero());
    EXPECT_TRUE(riesz_minus0(riesz_plus(f)).is_zero());
    EXPECT_EQ(std::abs(inner_product(riesz_plus(f), riesz_minus0(g))), 0.0);
  }
}

TEST(Fourier, Norms) {
  const TrigPoly one_plus_z = TrigPoly::scalar(0, {1.0, 1.0});
  EXPECT_NEAR(l2_norm(one_plus_z), std::sqrt(2.0), 1e-15);
  const TrigPoly one = TrigPoly::scalar(0, {1.0});
  for (double p : {1.0, 1.5, 2.0, 4.0, std::numeric_limits<double>::infinity()}) {
    EXPECT_NEAR(lp_norm_grid(one, p, 8), 1.0, 1e-15);
  }
  for (int M : {64, 128, 256}) EXPECT_NEAR(lp_norm_grid(one_plus_z, 4.0, M), std::pow(6.0, 0.25), 1e-10);
}

TEST(Fourier, GridL2AgreesWithCoefficientL2) {
  Rng rng(6);
  const TrigPoly f = rng.poly(2, -3, 5);
  EXPECT_NEAR(lp_norm_grid(f, 2.0, 64), l2_norm(f), 1e-12);
}

TEST(Fourier, GridTooSmallRejected) {
  Rng rng(7);
  EXPECT_THROW(lp_norm_grid(rng.poly(1, 0, 10), 2.0, 8), InputError);
}

TEST(Fourier, EvaluateOnGrid) {
  const auto c = evaluate_on_grid(TrigPoly::scalar(0, {cplx(2.0, 1.0)}), 5);
  for (const auto& v : c) EXPECT_EQ(v(0), cplx(2.0, 1.0));
  const auto z = evaluate_on_grid(TrigPoly::scalar(1, {1.0}), 4);
  const cplx expected[] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  for (int j = 0; j < 4; ++j) EXPECT_LT(std::abs(z[static_cast<std::size_t>(j)](0) - expected[j]), 1e-15);
}

TEST(Fourier, GridRoundTrip) {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const int lo = -rng.integer(0, 5);
    const int hi = rng.integer(0, 5);
    const TrigPoly f = rng.poly(3, lo, hi);
    const int M = default_grid_size(hi - lo + 1);
    EXPECT_LT(coeff_distance(from_grid_values(evaluate_on_grid(f, M), lo, hi), f), 1e-12);
  }
}

TEST(Fourier, GridEvaluationCommutesWithMul) {
  Rng rng(9);
  const MatrixSymbol G = rng.symbol(2, -2, 2);
  const TrigPoly f = rng.poly(2, -1, 3);
  const int M = 32;
  const auto gf = evaluate_on_grid(mul(G, f), M);
  const auto fv = evaluate_on_grid(f, M);
  for (int j = 0; j < M; ++j) {
    const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * j / M);
    EXPECT_LT((gf[static_cast<std::size_t>(j)] - G(z) * fv[static_cast<std::size_t>(j)]).norm(), 1e-12);
  }
}

TEST(Fourier, ExponentPair) {
  const ExponentPair inf = ExponentPair::bounded();
  EXPECT_EQ(inf.q(), 2.0);
  EXPECT_TRUE(inf.is_bounded_symbol());
  const ExponentPair four = ExponentPair::from_p(4.0);
  EXPECT_NEAR(four.q(), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(1.0 / four.q(), 0.5 + 1.0 / four.p(), 1e-15);
  EXPECT_THROW(ExponentPair::from_p(1.5), InputError);
}

TEST(Fourier, TruncateReportsDroppedMass) {
  const TrigPoly f = TrigPoly::scalar(-1, {3.0, 1.0, 4.0});
  const auto t = truncate(f, 0, 0);
  EXPECT_NEAR(t.dropped_l2, 5.0, 1e-15);
  EXPECT_EQ(coeff_distance(t.poly, TrigPoly::scalar(0, {1.0})), 0.0);
}

TEST(Fourier, SymbolAdjointIsPointwiseAdjoint) {
  Rng rng(10);
  const MatrixSymbol G = rng.symbol(3, -2, 3);
  const cplx z = std::polar(1.0, 0.7);
  EXPECT_LT((G.adjoint()(z) - G(z).adjoint()).norm(), 1e-13);
}

TEST(Fourier, PolyWindowCoordinates) {
  Rng rng(11);
  const PolyWindow w{2, 0, 3};
  const TrigPoly f = rng.poly(2, 1, 3);
  const Vec c = w.coords(f);
  EXPECT_EQ(c.size(), 8);
  EXPECT_EQ(c(2 * 1 + 1), f.coeff(1)(1));
  EXPECT_EQ(coeff_distance(w.poly(c), f), 0.0);
  EXPECT_THROW(w.coords(rng.poly(2, 0, 4)), InputError);
}

}  // namespace
}  // namespace mttokit
