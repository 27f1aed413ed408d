// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <unordered_map>

#include "commands.hpp"
#include "wafersage/curriculum.hpp"
#include "wafersage/errors.hpp"

namespace wafersage::cli {

int run_schedule(const ScheduleArgs& args) {
  RunConfig config = args.common.resolve();
  if (!args.rubrics.empty()) config.rubrics = args.rubrics;
  if (args.examples.empty() || config.rubrics.empty()) {
    std::cerr << "schedule: --examples and --rubrics are required\n";
    return kExitUsage;
  }
  const scoring::EvalConfig eval = resolve_eval_config(config, args.preset, args.eval_config);
  const rubric::RubricSet rubrics = rubric::load_rubrics(config.rubrics);

  std::unordered_map<std::string, double> baseline;
  if (!args.baseline.empty()) {
    for (const auto& row : util::read_jsonl(args.baseline)) {
      if (row.contains("id") && row.contains("overall")) {
        baseline[row.at("id").get<std::string>()] = row.at("overall").get<double>();
      }
    }
  }

  std::vector<curriculum::TrainingExample> examples;
  for (const auto& row : util::read_jsonl(args.examples)) {
    curriculum::TrainingExample ex;
    ex.example_id = row.at("example_id").get<std::string>();
    ex.wafer_id = row.value("wafer_id", std::string{});
    if (row.contains("question_type")) {
      const auto type = question_type_from_string(row.at("question_type").get<std::string>());
      if (!type) throw Error("unknown question_type in example " + ex.example_id);
      ex.question_type = *type;
    }
    ex.seen_in_sft = row.value("seen_in_sft", false);
    ex.rubric_id = row.value("rubric_id", ex.wafer_id);
    ex.question = row.value("question", std::string{});
    ex.image_ref = row.value("image_ref", std::string{});

    std::optional<double> baseline_score;
    if (auto it = baseline.find(ex.example_id); it != baseline.end()) {
      baseline_score = it->second;
    }
    ex.difficulty = curriculum::compute_difficulty(ex, baseline_score, rubrics.find(ex.rubric_id));
    ex.difficulty_source = baseline_score ? curriculum::DifficultySource::Baseline
                                          : curriculum::DifficultySource::KeywordProxy;
    examples.push_back(std::move(ex));
  }

  OutDirLock lock(config.out_dir);
  curriculum::Schedule schedule = curriculum::build_schedule(examples, args.interleave_ratio);
  schedule.seed = config.seed;

  std::unordered_map<std::string, const curriculum::TrainingExample*> by_id;
  for (const auto& ex : examples) by_id[ex.example_id] = &ex;

  std::vector<util::ordered_json> schedule_rows;
  schedule_rows.reserve(schedule.entries.size());
  for (std::size_t pos = 0; pos < schedule.entries.size(); ++pos) {
    const auto& entry = schedule.entries[pos];
    const auto* ex = by_id.at(entry.example_id);
    schedule_rows.push_back({{"position", pos},
                             {"phase", std::string(to_string(entry.phase))},
                             {"example_id", entry.example_id},
                             {"wafer_id", ex->wafer_id},
                             {"question_type", std::string(to_string(ex->question_type))},
                             {"difficulty", ex->difficulty},
                             {"difficulty_source",
                              std::string(to_string(ex->difficulty_source))}});
  }
  const auto header = make_header(eval, config.seed);
  util::write_file_atomic(std::filesystem::path(config.out_dir) / "schedule.jsonl",
                          jsonl_with_header(header, schedule_rows));

  std::map<std::string, curriculum::TrainingExample> example_map;
  for (const auto& ex : examples) example_map[ex.example_id] = ex;
  const curriculum::RewardManifest manifest =
      curriculum::export_reward_manifest(schedule, example_map, rubrics, eval, config.seed);
  util::write_file_atomic(std::filesystem::path(config.out_dir) / "reward_manifest.jsonl",
                          manifest.to_jsonl());

  std::size_t errors = 0;
  for (const auto& row : manifest.rows) {
    if (row.contains("error")) ++errors;
  }
  if (config.verbosity > 0) {
    std::cout << "schedule: " << schedule.entries.size() << " examples, " << errors
              << " manifest errors\n";
  }
  return errors > 0 ? kExitPartial : kExitOk;
}

}  // namespace wafersage::cli
