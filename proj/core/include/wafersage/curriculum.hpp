// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wafersage/rubric.hpp"
#include "wafersage/scoring.hpp"
#include "wafersage/types.hpp"

namespace wafersage::curriculum {

enum class Phase { Review, Learning };

constexpr std::string_view to_string(Phase p) {
  return p == Phase::Review ? "review" : "learning";
}

enum class DifficultySource { Baseline, KeywordProxy };

constexpr std::string_view to_string(DifficultySource s) {
  return s == DifficultySource::Baseline ? "baseline" : "keyword_proxy";
}

struct TrainingExample {
  std::string example_id;
  std::string wafer_id;
  QuestionType question_type = QuestionType::Spatial;
  bool seen_in_sft = false;
  double difficulty = 0.0;
  DifficultySource difficulty_source = DifficultySource::KeywordProxy;
  std::string rubric_id;   // usually the wafer_id
  std::string question;    // prompt text for the reward manifest
  std::string image_ref;
};

/// 1 - baseline overall score when a baseline exists, otherwise a keyword
/// proxy: min(1, total must-hit keywords / 20). A missing rubric counts as
/// zero keywords.
double compute_difficulty(const TrainingExample& example, std::optional<double> baseline_score,
                          const rubric::Rubric* rubric);

struct ScheduleEntry {
  Phase phase = Phase::Review;
  std::string example_id;
};

struct Schedule {
  std::vector<ScheduleEntry> entries;
  std::uint64_t seed = 0;  // provenance only; construction is deterministic
};

/// SFT-seen examples form the review phase, unseen ones the learning phase;
/// both sort ascending by (difficulty, example_id). With interleave_ratio = 0
/// all review entries precede all learning entries; a positive ratio mixes
/// roughly that many learning items per review item while preserving each
/// stream's order.
Schedule build_schedule(const std::vector<TrainingExample>& examples,
                        double interleave_ratio = 0.0);

struct RewardManifest {
  util::ordered_json header;
  std::vector<util::ordered_json> rows;

  std::string to_jsonl() const;
};

/// One row per scheduled example (prompt, image ref, rubric id) declaring
/// reward(response) = overall rule score under the pinned config. The header
/// embeds the config, its hash, and a content hash over the rows. Examples
/// whose rubric is missing become per-example error rows.
RewardManifest export_reward_manifest(const Schedule& schedule,
                                      const std::map<std::string, TrainingExample>& examples,
                                      const rubric::RubricSet& rubrics,
                                      const scoring::EvalConfig& config, std::uint64_t seed);

/// The declared reward: exactly scoring::evaluate_response(...).overall.
double reward(const std::string& response, const rubric::Rubric& rubric,
              const scoring::EvalConfig& config);

}  // namespace wafersage::curriculum
