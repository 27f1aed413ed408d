// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "wafersage/curation.hpp"

using namespace wafersage;

namespace {

std::vector<curation::EmbeddingRecord> blobs(int per_blob, int dim) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<curation::EmbeddingRecord> records;
  for (int blob = 0; blob < 3; ++blob) {
    for (int i = 0; i < per_blob; ++i) {
      curation::EmbeddingRecord rec;
      rec.wafer_id = "b" + std::to_string(blob) + "_" + std::to_string(i);
      rec.label = "X";
      for (int d = 0; d < dim; ++d) {
        rec.vector.push_back(static_cast<float>((d == 0 ? blob * 10.0 : 0.0) + noise(rng)));
      }
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace

static void BM_KMeans(benchmark::State& state) {
  const auto records = blobs(static_cast<int>(state.range(0)), 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(curation::kmeans(records, 3, 17));
  }
}
BENCHMARK(BM_KMeans)->Arg(100)->Arg(500);

static void BM_BalancedSample(benchmark::State& state) {
  const auto records = blobs(200, 8);
  const auto model = curation::kmeans(records, 3, 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(curation::balanced_sample(model, records, 10, 10));
  }
}
BENCHMARK(BM_BalancedSample);

BENCHMARK_MAIN();
