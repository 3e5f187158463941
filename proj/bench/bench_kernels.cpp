// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to the
// thread count of interest; results are bitwise identical either way.

#include <benchmark/benchmark.h>

#include <random>

#include "nhqm/cluster.hpp"
#include "nhqm/pfaffian.hpp"

using namespace nhqm;

namespace {

ComplexMatrix random_skew(std::size_t n) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> d;
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = cplx(d(rng), d(rng));
      a(j, i) = -a(i, j);
    }
  return a;
}

ClusterSpec spec() {
  ClusterSpec s;
  s.lambda = 0.9;
  s.Gamma = 2.0;
  return s;
}

template <Exec E>
void BM_Pfaffian(benchmark::State& state) {
  const ComplexMatrix a = random_skew(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pfaffian(a, 1e-10, E));
  state.SetComplexityN(state.range(0));
}

template <Exec E>
void BM_Correlators(benchmark::State& state) {
  const ClusterSpec s = spec();
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(correlator_elements(s, r, Quadrature::continuum, E));
}

template <Exec E>
void BM_ClusterMetric(benchmark::State& state) {
  ClusterSpec s = spec();
  s.n_modes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ground_state_metric(s, ClusterParam::Gamma, 1e-4, E));
}

}  // namespace

BENCHMARK(BM_Pfaffian<Exec::serial>)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Pfaffian<Exec::parallel>)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Correlators<Exec::serial>)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Correlators<Exec::parallel>)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClusterMetric<Exec::serial>)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClusterMetric<Exec::parallel>)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
