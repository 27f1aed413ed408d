// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "wafersage/matching.hpp"

using namespace wafersage;

namespace {

const std::string kResponse = matching::normalize(
    "The wafer map shows a dense amorphous cluster at the center (0,0) plus a sharp "
    "continuous linear scratch running from the upper-left quadrant toward the lower "
    "hemisphere; an edge-ring pattern of medium-density failures hugs the wafer periphery, "
    "most likely from non-uniformity in the wet process or a mechanical handling error "
    "during deposition");

const std::vector<std::string> kKeywords = {
    "center",        "edge",           "mid-radius",        "lower hemisphere",
    "multi-modal",   "high-density cluster", "edge-ring pattern", "upper-left quadrant",
    "center 0",      "0",              "amorphous blob",    "continuous band",
    "linear feature"};

}  // namespace

static void BM_Normalize(benchmark::State& state) {
  const std::string raw =
      "Dense Amorphous CLUSTER, at Center (0,0); edge-ring pattern -- periphery!";
  for (auto _ : state) {
    benchmark::DoNotOptimize(matching::normalize(raw));
  }
}
BENCHMARK(BM_Normalize);

static void BM_Similarity(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(matching::similarity("mechanical handling error",
                                                  "mechanical handling eror"));
  }
}
BENCHMARK(BM_Similarity);

static void BM_KeywordHit(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(matching::keyword_hit(kResponse, "edge-ring pattern", 0.713));
  }
}
BENCHMARK(BM_KeywordHit);

static void BM_CountCoverage(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(matching::count_coverage(kResponse, kKeywords, 0.713));
  }
}
BENCHMARK(BM_CountCoverage);

BENCHMARK_MAIN();
