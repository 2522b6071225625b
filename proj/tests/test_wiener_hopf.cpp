#include <gtest/gtest.h>

#include <cmath>

#include "mttokit/wiener_hopf.hpp"
#include "support.hpp"

namespace mttokit {
namespace {

using testing::Rng;

Vec vec2(cplx a, cplx b) {
  Vec v(2);
  v << a, b;
  return v;
}

double max_abs_diff(const GridFunction& g, const std::function<Vec(double)>& exact) {
  double e = 0.0;
  for (Index i = 0; i < g.n(); ++i) {
    for (int l = 0; l <= g.M; ++l) {
      const double x = g.node(i, l);
      e = std::max(e, std::abs(g.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] - exact(x)(i)));
    }
  }
  return e;
}

TEST(WhApply, ConstantKernelAndInput) {
  const double a = 1.5;
  const IntervalKernel G(PolynomialKernel{{Mat::Identity(2, 2)}}, a, a);
  const Vec c = vec2(2.0, cplx(0, -1));
  const auto w = wh_apply(G, [&](double) { return c; }, 16);
  EXPECT_LT(max_abs_diff(w, [&](double) { return Vec(a * c); }), 1e-13);
}

TEST(WhApply, LinearKernel) {
  const double a = 2.0;
  const IntervalKernel G(PolynomialKernel{{Mat::Zero(1, 1), Mat::Identity(1, 1)}}, a, a);
  const auto w = wh_apply(G, [](double) { return Vec::Ones(1); }, 32);
  EXPECT_LT(max_abs_diff(w, [&](double x) { return Vec::Constant(1, a * x - a * a / 2); }), 1e-12);
}

TEST(WhApply, LinearInInput) {
  Rng rng(1);
  ExpIndicator e{rng.mat(2, 2), rng.mat(2, 2), ExpIndicator::Side::positive};
  const IntervalKernel G(e, 1.0, 1.0);
  const cplx s = rng.complex();
  const auto f = [](double t) { return vec2(std::sin(t), std::cos(2 * t)); };
  const auto g = [](double t) { return vec2(t * t, std::exp(-t)); };
  const auto wf = wh_apply(G, f, 64);
  const auto wg = wh_apply(G, g, 64);
  const auto wsum = wh_apply(G, [&](double t) { return Vec(f(t) + s * g(t)); }, 64);
  for (Index i = 0; i < 2; ++i) {
    for (int l = 0; l <= 64; ++l) {
      const auto li = static_cast<std::size_t>(l);
      const auto ii = static_cast<std::size_t>(i);
      EXPECT_LT(std::abs(wsum.values[ii][li] - wf.values[ii][li] - s * wg.values[ii][li]), 1e-12);
    }
  }
}

TEST(WhApply, SelfConvergenceIsSecondOrder) {
  Rng rng(2);
  ExpIndicator e{-Mat::Identity(2, 2) + 0.3 * rng.mat(2, 2), rng.mat(2, 2), ExpIndicator::Side::positive};
  const IntervalKernel G(e, 1.0, 1.0);
  const Vec c1 = rng.vec(2);
  const Vec c2 = rng.vec(2);
  const auto r = wh_self_convergence(G, [&](double t) { return Vec(c1 * std::cos(3 * t) + c2 * t); }, 200);
  EXPECT_GE(r.ratio, 3.5);
}

TEST(WhApply, EqualLengthsReproduceSingleIntegral) {
  Rng rng(3);
  PolynomialKernel p{{rng.mat(2, 2), rng.mat(2, 2)}};
  const IntervalKernel split(p, 1.0, 1.0, 1);
  const IntervalKernel whole(p, 1.0, 1.0);
  const auto k = [](double t) { return vec2(std::sin(t), 1.0 + t); };
  const auto a = wh_apply(split, k, 40);
  const auto b = wh_apply(whole, k, 40);
  EXPECT_LT(relative_l2(a, b), 1e-15);
}

TEST(WhApply, UnequalLengthsUseRowBounds) {
  // G = ones: (W k)_i(x) = sum_j int_0^{min(c_i, c_j)} k_j(t) dt.
  const IntervalKernel G(PolynomialKernel{{Mat::Ones(2, 2)}}, 1.0, 2.0, 1);
  const auto w = wh_apply(G, [](double) { return vec2(1.0, 1.0); }, 64);
  EXPECT_LT(max_abs_diff(w, [](double) { return vec2(2.0, 3.0); }), 1e-13);
}

TEST(WhApply, KernelOutsideDomainRejected) {
  const IntervalKernel G(SampledKernel{0.0, 0.5, {Mat::Ones(1, 1), Mat::Ones(1, 1)}}, 1.0, 1.0);
  EXPECT_THROW(G(-0.5), InputError);
}

TEST(MatrixExponential, Examples) {
  Mat A(2, 2);
  A << -1, 1, 0, -2;
  Mat expected(2, 2);
  const double e1 = std::exp(-1.0);
  const double e2 = std::exp(-2.0);
  expected << e1, e1 - e2, 0, e2;
  EXPECT_LT((matrix_exponential(A) - expected).norm(), 1e-14);
  Mat rot(2, 2);
  rot << 0, -1, 1, 0;
  Mat r(2, 2);
  r << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
  EXPECT_LT((matrix_exponential(rot) - r).norm(), 1e-14);
}

StateSpaceSystem paper_system() {
  StateSpaceSystem s;
  s.A.resize(2, 2);
  s.A << -1, 1, 0, -2;
  s.B = Mat::Identity(2, 2);
  s.C = Mat::Identity(2, 2);
  s.D = Mat::Zero(2, 2);
  s.v0 = vec2(1.0, 0.0);
  s.horizon = 1.0;
  return s;
}

TEST(Mimo, ConstantInputWithZeroDynamics) {
  StateSpaceSystem s = paper_system();
  s.A = Mat::Zero(2, 2);
  s.v0 = Vec::Zero(2);
  const Vec c = vec2(1.0, -2.0);
  const auto sol = mimo_solve(s, [&](double) { return c; }, 50, Convention::causal);
  for (std::size_t l = 0; l < sol.x.size(); ++l) EXPECT_LT((sol.v[l] - sol.x[l] * c).norm(), 1e-13);
}

TEST(Mimo, HomogeneousMatchesMatrixExponential) {
  const StateSpaceSystem s = paper_system();
  for (int M : {10, 100, 1000}) {
    for (Convention c : {Convention::causal, Convention::paper_literal}) {
      const auto sol = mimo_solve(s, [](double) { return Vec::Zero(2); }, M, c);
      for (std::size_t l = 0; l < sol.x.size(); ++l) {
        EXPECT_LT((sol.v[l] - matrix_exponential(s.A * sol.x[l]) * s.v0).norm(), 1e-8);
      }
    }
  }
}

TEST(Mimo, CausalConventionMatchesRk4) {
  const StateSpaceSystem s = paper_system();
  const auto u = [](double x) { return vec2(std::sin(x), std::cos(x)); };
  const auto r = mimo_report(s, u, 1000, 10000);
  ASSERT_TRUE(r.adjudicated.has_value());
  EXPECT_EQ(*r.adjudicated, Convention::causal);
  EXPECT_LT(r.checks[0].rk4_relative_error, 1e-4);
  EXPECT_GT(r.checks[1].rk4_relative_error, 1e-2);
  EXPECT_TRUE(r.checks[0].satisfies_state_equation);
  EXPECT_FALSE(r.checks[1].satisfies_state_equation);
}

TEST(Mimo, OutputEquation) {
  Rng rng(4);
  StateSpaceSystem s = paper_system();
  s.C = rng.mat(2, 2);
  s.D = rng.mat(2, 2);
  const auto u = [](double x) { return vec2(x, 1.0); };
  const auto sol = mimo_solve(s, u, 100, Convention::causal);
  for (std::size_t l = 0; l < sol.x.size(); ++l) {
    EXPECT_LT((sol.y[l] - s.C * sol.v[l] - s.D * u(sol.x[l])).norm(), 1e-13);
  }
}

TEST(Rk4, HomogeneousAndZeroDynamics) {
  StateSpaceSystem s = paper_system();
  const auto h = ode_oracle(s, [](double) { return Vec::Zero(2); }, 1000);
  EXPECT_LT((h.back() - matrix_exponential(s.A) * s.v0).norm(), 1e-8);
  s.A = Mat::Zero(2, 2);
  s.v0 = Vec::Zero(2);
  const auto z = ode_oracle(s, [](double x) { return vec2(x, 1.0); }, 10);
  EXPECT_LT((z.back() - vec2(0.5, 1.0)).norm(), 1e-14);
}

TEST(Rk4, FourthOrder) {
  const StateSpaceSystem s = paper_system();
  const auto u = [](double x) { return vec2(std::sin(3 * x), std::cos(x)); };
  const Vec ref = ode_oracle(s, u, 4096).back();
  const double e1 = (ode_oracle(s, u, 16).back() - ref).norm();
  const double e2 = (ode_oracle(s, u, 32).back() - ref).norm();
  EXPECT_NEAR(e1 / e2, 16.0, 2.0);
}

TEST(ClosedForm, PairsAreFourierTransforms) {
  // Midpoint quadrature of int G(x) exp(-i w x) dx on a wide interval.
  for (auto kind : {ClosedFormPair::Kind::causal, ClosedFormPair::Kind::anticausal, ClosedFormPair::Kind::two_sided}) {
    const ClosedFormPair p{kind, 1.5};
    for (double w : {0.0, 0.7, -2.0}) {
      const int n = 400000;
      const double L = 40.0;
      const double h = 2 * L / n;
      cplx s = 0.0;
      for (int j = 0; j < n; ++j) {
        const double x = -L + (j + 0.5) * h;
        s += p.G(x) * std::polar(1.0, -w * x) * h;
      }
      EXPECT_LT(std::abs(s - p.H(w)), 1e-6) << to_string(kind) << " w=" << w;
    }
  }
}

TEST(Equivalence, ZeroInputGivesZero) {
  const auto lvl = equivalence_level({ClosedFormPair{}}, [](double) { return Vec::Zero(1); }, 1.0, 1 << 12, 8.0);
  EXPECT_EQ(lvl.discrepancy, 0.0);
}

TEST(Equivalence, CausalPairWithBump) {
  const auto k = [](double t) { return Vec::Constant(1, smooth_bump(t, 1.0)); };
  const auto r = unitary_equivalence_check({ClosedFormPair{}}, k, 1.0, 1 << 14, 8.0);
  ASSERT_EQ(r.levels.size(), 3u);
  EXPECT_LT(r.levels[0].discrepancy, 1e-3);
  EXPECT_TRUE(r.decreasing);
  EXPECT_LT(r.levels[2].discrepancy, 0.5 * r.levels[0].discrepancy);
  EXPECT_TRUE(r.pass);
}

TEST(Equivalence, InvalidGeometryRejected) {
  const auto k = [](double t) { return Vec::Constant(1, smooth_bump(t, 1.0)); };
  EXPECT_THROW(equivalence_level({ClosedFormPair{}}, k, 1.0, 1 << 12, 4.0), InputError);
}

}  // namespace
}  // namespace mttokit
