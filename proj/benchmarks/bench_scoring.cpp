// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <filesystem>

#include "wafersage/scoring.hpp"
#include "wafersage/util.hpp"

using namespace wafersage;

namespace {

const rubric::Rubric& example_rubric() {
  static const rubric::Rubric r = rubric::parse_rubric(
      util::read_file(std::filesystem::path(WAFERSAGE_FIXTURES_DIR) / "rubric_multimodal.json"));
  return r;
}

const std::string kResponse =
    "A high-density cluster sits at the center with an edge-ring pattern along the wafer "
    "periphery; the linear feature suggests a mechanical handling error during deposition "
    "or etch, possibly thermal gradient related.";

}  // namespace

static void BM_EvaluateResponse(benchmark::State& state) {
  const scoring::EvalConfig config = scoring::EvalConfig::table1_optimized();
  for (auto _ : state) {
    benchmark::DoNotOptimize(scoring::evaluate_response(kResponse, example_rubric(), config));
  }
}
BENCHMARK(BM_EvaluateResponse);

static void BM_EvaluateDataset186(benchmark::State& state) {
  const scoring::EvalConfig config = scoring::EvalConfig::table1_optimized();
  std::vector<scoring::EvalItem> items;
  for (int i = 0; i < 186; ++i) {
    items.push_back({"q" + std::to_string(i), "w", Dimension::Spatial, "Q", kResponse});
  }
  const auto lookup = [](const std::string&) { return &example_rubric(); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(scoring::evaluate_dataset(items, lookup, config));
  }
}
BENCHMARK(BM_EvaluateDataset186);

BENCHMARK_MAIN();
