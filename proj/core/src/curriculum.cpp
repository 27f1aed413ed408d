// SPDX-License-Identifier: Apache-2.0
#include "wafersage/curriculum.hpp"

#include <algorithm>
#include <cmath>

#include "wafersage/errors.hpp"
#include "wafersage/version.hpp"

namespace wafersage::curriculum {

double compute_difficulty(const TrainingExample& example, std::optional<double> baseline_score,
                          const rubric::Rubric* rubric) {
  (void)example;
  if (baseline_score) {
    return std::clamp(1.0 - *baseline_score, 0.0, 1.0);
  }
  const std::size_t keywords = rubric ? rubric->total_must_hit() : 0;
  return std::min(1.0, static_cast<double>(keywords) / 20.0);
}

Schedule build_schedule(const std::vector<TrainingExample>& examples, double interleave_ratio) {
  for (const auto& ex : examples) {
    if (!(ex.difficulty >= 0.0 && ex.difficulty <= 1.0)) {
      throw Error("example \"" + ex.example_id + "\" has difficulty outside [0, 1]");
    }
  }

  std::vector<const TrainingExample*> review;
  std::vector<const TrainingExample*> learning;
  for (const auto& ex : examples) {
    (ex.seen_in_sft ? review : learning).push_back(&ex);
  }
  const auto by_difficulty = [](const TrainingExample* a, const TrainingExample* b) {
    if (a->difficulty != b->difficulty) return a->difficulty < b->difficulty;
    return a->example_id < b->example_id;
  };
  std::sort(review.begin(), review.end(), by_difficulty);
  std::sort(learning.begin(), learning.end(), by_difficulty);

  Schedule schedule;
  schedule.entries.reserve(examples.size());
  if (interleave_ratio <= 0.0) {
    for (const auto* ex : review) schedule.entries.push_back({Phase::Review, ex->example_id});
    for (const auto* ex : learning) schedule.entries.push_back({Phase::Learning, ex->example_id});
    return schedule;
  }

  // interleave: after each review item, emit learning items at the given rate
  std::size_t li = 0;
  double credit = 0.0;
  for (const auto* ex : review) {
    schedule.entries.push_back({Phase::Review, ex->example_id});
    credit += interleave_ratio;
    while (credit >= 1.0 && li < learning.size()) {
      schedule.entries.push_back({Phase::Learning, learning[li++]->example_id});
      credit -= 1.0;
    }
  }
  while (li < learning.size()) {
    schedule.entries.push_back({Phase::Learning, learning[li++]->example_id});
  }
  return schedule;
}

double reward(const std::string& response, const rubric::Rubric& rubric,
              const scoring::EvalConfig& config) {
  return scoring::evaluate_response(response, rubric, config).overall;
}

RewardManifest export_reward_manifest(const Schedule& schedule,
                                      const std::map<std::string, TrainingExample>& examples,
                                      const rubric::RubricSet& rubrics,
                                      const scoring::EvalConfig& config, std::uint64_t seed) {
  RewardManifest manifest;

  for (const ScheduleEntry& entry : schedule.entries) {
    util::ordered_json row = util::ordered_json::object();
    row["example_id"] = entry.example_id;
    row["phase"] = std::string(to_string(entry.phase));

    auto it = examples.find(entry.example_id);
    if (it == examples.end()) {
      row["error"] = "unknown example_id";
      manifest.rows.push_back(std::move(row));
      continue;
    }
    const TrainingExample& ex = it->second;
    row["wafer_id"] = ex.wafer_id;
    row["question_type"] = std::string(to_string(ex.question_type));
    row["difficulty"] = ex.difficulty;
    row["difficulty_source"] = std::string(to_string(ex.difficulty_source));

    const std::string rubric_id = ex.rubric_id.empty() ? ex.wafer_id : ex.rubric_id;
    if (rubrics.find(rubric_id) == nullptr) {
      row["error"] = "missing rubric \"" + rubric_id + "\"";
      manifest.rows.push_back(std::move(row));
      continue;
    }
    row["prompt"] = ex.question;
    row["image_ref"] = ex.image_ref;
    row["rubric_id"] = rubric_id;
    manifest.rows.push_back(std::move(row));
  }

  std::string rows_blob;
  for (const auto& row : manifest.rows) {
    rows_blob += row.dump();
    rows_blob += '\n';
  }

  manifest.header = util::ordered_json::object();
  manifest.header["manifest_version"] = 1;
  manifest.header["tool_version"] = kVersion;
  manifest.header["reward"] = "rule_overall_score";
  manifest.header["eval_config"] = config.to_json();
  manifest.header["eval_config_hash"] = config.canonical_hash();
  manifest.header["content_hash"] = util::sha256_hex(rows_blob);
  manifest.header["seed"] = seed;
  return manifest;
}

std::string RewardManifest::to_jsonl() const {
  std::string out = util::ordered_json{{"header", header}}.dump();
  out += '\n';
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  return out;
}

}  // namespace wafersage::curriculum
