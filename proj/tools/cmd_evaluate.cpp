// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "commands.hpp"
#include "wafersage/errors.hpp"

namespace wafersage::cli {

RunConfig CommonArgs::resolve() const {
  RunConfig config;
  if (!config_path.empty()) config = RunConfig::load(config_path);
  if (!out_dir.empty()) config.out_dir = out_dir;
  if (seed_set) config.seed = seed;
  return config;
}

int run_evaluate(const EvaluateArgs& args) {
  RunConfig config = args.common.resolve();
  if (!args.responses.empty()) config.responses = args.responses;
  if (!args.rubrics.empty()) config.rubrics = args.rubrics;
  if (config.responses.empty() || config.rubrics.empty()) {
    std::cerr << "evaluate: --responses and --rubrics are required\n";
    return kExitUsage;
  }
  const scoring::EvalConfig eval = resolve_eval_config(config, args.preset, args.eval_config);

  const rubric::RubricSet rubrics = rubric::load_rubrics(config.rubrics);
  std::vector<scoring::EvalItem> items;
  for (const auto& row : util::read_jsonl(config.responses)) {
    items.push_back(scoring::eval_item_from_json(row));
  }

  OutDirLock lock(config.out_dir);
  const scoring::DatasetReport report = scoring::evaluate_dataset(
      std::move(items), [&](const std::string& id) { return rubrics.find(id); }, eval);

  const auto header = make_header(eval, config.seed);
  std::vector<util::ordered_json> rows;
  rows.reserve(report.items.size());
  for (const auto& item : report.items) {
    rows.push_back(scoring::item_result_to_json(item, args.evidence));
  }
  util::write_file_atomic(std::filesystem::path(config.out_dir) / "evaluations.jsonl",
                          jsonl_with_header(header, rows));

  util::ordered_json summary = util::ordered_json::object();
  summary["header"] = header.at("header");
  summary["summary"] = scoring::dataset_summary_to_json(report);
  util::write_file_atomic(std::filesystem::path(config.out_dir) / "summary.json",
                          summary.dump(2) + "\n");

  if (config.verbosity > 0) {
    std::cout << "evaluate: " << report.scored << " scored, " << report.failed << " failed";
    if (report.mean_overall) std::cout << ", mean overall " << *report.mean_overall;
    std::cout << "\n";
  }

  if (report.failed > 0 && report.scored == 0) return kExitFatal;
  if (report.failed > 0) return kExitPartial;
  return kExitOk;
}

}  // namespace wafersage::cli
