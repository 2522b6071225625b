#include <benchmark/benchmark.h>

#include <cmath>

#include "mttokit/eae.hpp"
#include "mttokit/mtto.hpp"
#include "mttokit/near_invariance.hpp"
#include "mttokit/wiener_hopf.hpp"
#include "support.hpp"

namespace {

using namespace mttokit;

MatrixInner monomial_theta(int n, int k) { return MatrixInner::diagonal_monomials(std::vector<int>(static_cast<std::size_t>(n), k)); }

void BM_AssembleMtto(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const ModelSpace ms(monomial_theta(3, k));
  const MatrixSymbol G = testing::Rng(1).symbol(3, -2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_mtto(ms, G).matrix.data());
  state.SetLabel("dim " + std::to_string(ms.dim()));
}
BENCHMARK(BM_AssembleMtto)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BlaschkeModelSpace(benchmark::State& state) {
  std::vector<cplx> zeros;
  for (int j = 0; j < state.range(0); ++j) zeros.push_back(std::polar(0.6, 0.7 * j));
  const MatrixInner theta({ScalarInner::blaschke(zeros), ScalarInner::monomial(2)});
  for (auto _ : state) benchmark::DoNotOptimize(ModelSpace(theta).dim());
}
BENCHMARK(BM_BlaschkeModelSpace)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_KernelProjection(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const ModelSpace ms(monomial_theta(2, k));
  const MatrixSymbol G = testing::Rng(2).symbol(2, -1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(verify_kernel_projection(ms, G).principal_angle);
}
BENCHMARK(BM_KernelProjection)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_FactorOperators(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const ModelSpace ms(monomial_theta(2, k));
  const MatrixSymbol G = testing::Rng(3).symbol(2, -1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(factor_operators(ms, G).residual);
}
BENCHMARK(BM_FactorOperators)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_NearInvariance(benchmark::State& state) {
  const ModelSpace ms(monomial_theta(2, static_cast<int>(state.range(0))));
  const MatrixSymbol G = MatrixSymbol::monomial(Mat::Identity(2, 2), 1);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_near_invariance(ms, G).report.pass);
}
BENCHMARK(BM_NearInvariance)->Arg(2)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_WhApply(benchmark::State& state) {
  Mat A(2, 2);
  A << -1, 1, 0, -2;
  const IntervalKernel G(ExpIndicator{A, Mat::Identity(2, 2), ExpIndicator::Side::positive}, 1.0, 1.0);
  const auto k = [](double t) {
    Vec v(2);
    v << std::sin(t), std::cos(t);
    return v;
  };
  const int M = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wh_apply(G, k, M).values.data());
}
BENCHMARK(BM_WhApply)->Arg(250)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Equivalence(benchmark::State& state) {
  const auto k = [](double t) { return Vec::Constant(1, smooth_bump(t, 1.0)); };
  const int M = 1 << state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(equivalence_level({ClosedFormPair{}}, k, 1.0, M, 8.0).discrepancy);
}
BENCHMARK(BM_Equivalence)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_LpDiagnostic(benchmark::State& state) {
  const auto zeros = critical_zero_sequence();
  const auto K = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lp_membership_diagnostic(zeros, 1.0, 2.0, K).partial_sums.back());
}
BENCHMARK(BM_LpDiagnostic)->Arg(1 << 14)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
