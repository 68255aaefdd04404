// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "kerrcrit/liouvillian.hpp"
#include "kerrcrit/phase_space.hpp"
#include "kerrcrit/spectral.hpp"
#include "kerrcrit/steady_state.hpp"

namespace
{

using namespace kerrcrit;

const ModelParams kPoint{2.0, 1.0, 1.0, 1.0, 4.0};

void BM_BuildLiouvillian(benchmark::State &state)
{
  const int c = static_cast<int>(state.range(0));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(build_liouvillian(kPoint, c));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildLiouvillian)->Arg(10)->Arg(20)->Arg(40)->Arg(80);

void BM_ApplyLiouvillian(benchmark::State &state)
{
  const int c = static_cast<int>(state.range(0));
  const Superoperator L = build_liouvillian(kPoint, c);
  const Eigen::VectorXcd v = Eigen::VectorXcd::Random(L.dim());
  Eigen::VectorXcd out(L.dim());
  for (auto _ : state)
  {
    out.noalias() = L.matrix() * v;
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ApplyLiouvillian)->Arg(20)->Arg(40)->Arg(80);

void BM_SteadyState(benchmark::State &state)
{
  const int c = static_cast<int>(state.range(0));
  const Superoperator L = build_liouvillian(kPoint, c);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(steady_state_numeric(L));
  }
}
BENCHMARK(BM_SteadyState)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_AnalyticMoments(benchmark::State &state)
{
  ModelParams p = kPoint;
  p.n_scale = static_cast<double>(state.range(0));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(observables(p));
  }
}
BENCHMARK(BM_AnalyticMoments)->Arg(1)->Arg(10)->Arg(50);

void BM_Gap(benchmark::State &state)
{
  const int c = static_cast<int>(state.range(0));
  const Superoperator L = build_liouvillian(kPoint, c);
  SolverOptions dense;
  dense.dense_dim_threshold = 1 << 20;
  SolverOptions krylov;
  krylov.dense_dim_threshold = 0;
  const SolverOptions &opts = state.range(1) ? krylov : dense;
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(liouvillian_gap(L, opts));
  }
  state.SetLabel(state.range(1) ? "krylov" : "dense");
}
BENCHMARK(BM_Gap)->Args({8, 0})->Args({8, 1})->Args({14, 0})->Args({14, 1})->Args({30, 1})->Unit(benchmark::kMillisecond);

void BM_Wigner(benchmark::State &state)
{
  const ModelParams p{2.0, 1.0, 1.0, 1.0, 1.0};
  const DensityMatrix rho = steady_state_numeric(build_liouvillian(p, 14));
  const GridSpec grid = GridSpec::square(3.0, static_cast<int>(state.range(0)));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(wigner(rho, grid, p.n_scale));
  }
}
BENCHMARK(BM_Wigner)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
