// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <unordered_map>

#include "commands.hpp"
#include "wafersage/alignment.hpp"
#include "wafersage/errors.hpp"

namespace wafersage::cli {

namespace {

alignment::ObjectiveMode mode_from_string(const std::string& s) {
  if (s == "overall") return alignment::ObjectiveMode::Overall;
  if (s == "spatial") return alignment::ObjectiveMode::Spatial;
  if (s == "morphology") return alignment::ObjectiveMode::Morphology;
  if (s == "root_cause") return alignment::ObjectiveMode::RootCause;
  throw Error("unknown alignment mode \"" + s + "\"");
}

}  // namespace

int run_align(const AlignArgs& args) {
  RunConfig config = args.common.resolve();
  if (!args.responses.empty()) config.responses = args.responses;
  if (!args.rubrics.empty()) config.rubrics = args.rubrics;
  if (config.responses.empty() || config.rubrics.empty() || args.verdicts.empty()) {
    std::cerr << "align: --responses, --rubrics and --judge are required\n";
    return kExitUsage;
  }
  const alignment::ObjectiveMode mode = mode_from_string(args.mode);

  const rubric::RubricSet rubrics = rubric::load_rubrics(config.rubrics);

  std::unordered_map<std::string, judge::JudgeVerdict> verdicts;
  for (const auto& row : util::read_jsonl(args.verdicts)) {
    if (row.contains("error")) continue;  // failed judge items cannot align
    verdicts[row.at("id").get<std::string>()] = judge::JudgeVerdict::from_json(row);
  }

  std::vector<alignment::AlignmentItem> items;
  std::size_t skipped = 0;
  for (const auto& row : util::read_jsonl(config.responses)) {
    const auto item = scoring::eval_item_from_json(row);
    const auto verdict = verdicts.find(item.id);
    const rubric::Rubric* r = rubrics.find(item.wafer_id);
    if (verdict == verdicts.end() || r == nullptr) {
      ++skipped;
      continue;
    }
    items.push_back({item.id, item.response, r, item.dimension, verdict->second});
  }

  OutDirLock lock(config.out_dir);
  const alignment::AlignmentDataset dataset = alignment::AlignmentDataset::build(std::move(items));

  alignment::SearchSpace space;
  const auto result = alignment::optimize(space, dataset, args.budget, config.seed, mode);

  // Best config in the EvalConfig file format, header first.
  util::ordered_json best = util::ordered_json::object();
  best["header"] = make_header(result.best, config.seed).at("header");
  const util::ordered_json best_fields = result.best.to_json();
  for (const auto& [key, value] : best_fields.items()) best[key] = value;
  util::write_file_atomic(std::filesystem::path(config.out_dir) / "best_config.json",
                          best.dump(2) + "\n");

  std::vector<util::ordered_json> trace_rows;
  trace_rows.reserve(result.trace.entries.size());
  for (std::size_t i = 0; i < result.trace.entries.size(); ++i) {
    trace_rows.push_back(
        alignment::trace_entry_to_json(result.trace.entries[i], static_cast<int>(i)));
  }
  util::write_file_atomic(std::filesystem::path(config.out_dir) / "trace.jsonl",
                          jsonl_with_header(make_header(config.eval, config.seed), trace_rows));

  if (config.verbosity > 0) {
    std::cout << "align: best objective " << result.best_objective << " over "
              << result.trace.entries.size() << " evaluations";
    if (skipped > 0) std::cout << " (" << skipped << " items skipped)";
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace wafersage::cli
