// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wafersage/alignment.hpp"

using namespace wafersage;

static void BM_Spearman(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(rng() % 1000) / 100.0;  // plenty of ties
    y[i] = static_cast<double>(rng() % 1000) / 100.0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(alignment::spearman(x, y));
  }
}
BENCHMARK(BM_Spearman)->Arg(62)->Arg(186)->Arg(1000);

BENCHMARK_MAIN();
