#include <benchmark/benchmark.h>

#include "lagpsd/appendix.hpp"
#include "lagpsd/cases.hpp"
#include "lagpsd/models.hpp"

using namespace lagpsd;

static void BM_GaussLaguerreRule(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_laguerre_rule(n));
  state.SetComplexityN(n);
}
BENCHMARK(BM_GaussLaguerreRule)->RangeMultiplier(2)->Range(10, 160)->Complexity();

static void BM_RadauLaguerreRule(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(radau_laguerre_rule(n));
}
BENCHMARK(BM_RadauLaguerreRule)->RangeMultiplier(2)->Range(10, 160);

static void BM_WeightedDiffMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto x = extend(build_scaled_mesh(NodeFamily::LaguerreZeros, n, 1.0)).nodes;
  for (auto _ : state) benchmark::DoNotOptimize(weighted_diff_matrix(x, 1.0));
  state.SetComplexityN(n);
}
BENCHMARK(BM_WeightedDiffMatrix)->RangeMultiplier(2)->Range(10, 160)->Complexity(benchmark::oNSquared);

// assembly of a distributed-delay row block, Gauss vs adaptive functional
static void BM_AssembleCase(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QuadMode q = state.range(1) ? QuadMode::Adaptive : QuadMode::Gauss;
  auto c = linear_case("e");
  for (auto _ : state) benchmark::DoNotOptimize(assemble_case(c, NodeFamily::LaguerreZeros, n, 2.0, 2.0, q));
}
BENCHMARK(BM_AssembleCase)->ArgsProduct({{10, 20, 40, 80}, {0, 1}})->Unit(benchmark::kMicrosecond);

static void BM_EigDense(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto op = assemble_case(linear_case("b"), NodeFamily::LaguerreExtrema, n, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(eig_dense(op.matrix));
  state.SetComplexityN(n);
}
BENCHMARK(BM_EigDense)->RangeMultiplier(2)->Range(10, 160)->Complexity(benchmark::oNCubed)->Unit(benchmark::kMicrosecond);

static void BM_CollocRecurrence(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(colloc_recurrence(cplx(-1, 0.5), 1.0, 0.0, n, NodeFamily::LaguerreZeros));
}
BENCHMARK(BM_CollocRecurrence)->DenseRange(5, 30, 5)->Unit(benchmark::kMicrosecond);

static void BM_MeasuredError(benchmark::State& state) {
  auto s = colloc_recurrence(-1.0, 1.0, 0.0, static_cast<int>(state.range(0)), NodeFamily::LaguerreZeros);
  for (auto _ : state) benchmark::DoNotOptimize(measured_error(s));
}
BENCHMARK(BM_MeasuredError)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_BlowfliesContinuation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double mu = 2, bp = mu * std::exp(mu);
  ModelFactory fam = [mu](double b) {
    BlowfliesParams p;
    p.beta0 = b;
    p.mu = mu;
    return model_blowflies(p);
  };
  ContinuationOptions o;
  o.lo = 0.5 * bp;
  o.hi = 15 * bp;
  o.steps = 40;
  o.n = n;
  o.head_guess = [mu](double b) { return blowflies_equilibrium(b, mu); };
  for (auto _ : state) benchmark::DoNotOptimize(continue_equilibrium(fam, o));
}
BENCHMARK(BM_BlowfliesContinuation)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_HopfCurve(benchmark::State& state) {
  BerettaBredaParams p;
  p.rho_fraction = 0.5;
  for (auto _ : state)
    benchmark::DoNotOptimize(hopf_curve_2param(p, {6.5, 7.0, 7.5}, 0.3, 6.0, 60, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_HopfCurve)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
