// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wafersage/rubric.hpp"
#include "wafersage/scoring.hpp"
#include "wafersage/transport.hpp"

namespace wafersage::judge {

/// Version string baked into prompts and cache keys; bump on any template
/// change so stale cache entries stop matching.
inline constexpr const char* kPromptVersion = "judge.v1";

struct JudgeVerdict {
  double spatial = 0.0;
  double morphology = 0.0;
  double root_cause = 0.0;
  double overall = 0.0;
  bool overall_derived = false;  // overall was absent and computed as the mean
  std::string model_id;
  std::string raw_text;

  double dimension(Dimension d) const;
  util::ordered_json to_json() const;
  static JudgeVerdict from_json(const util::ordered_json& j);
};

/// Deterministic judging prompt. Includes the rubric's defect types and
/// summary when include_rubric is set (the summary block is omitted when the
/// rubric has none).
std::string build_judge_prompt(const std::string& question, const std::string& response,
                               const rubric::Rubric& rubric, bool include_rubric = true);

/// Extracts 1-10 scores for the three dimensions from a judge reply: first a
/// JSON object carrying all three keys, then "dimension: number" pairs as a
/// fallback. Scores outside [1, 10] raise OutOfRangeError; a reply with no
/// scores raises UnparseableError. A missing overall is derived as the
/// unweighted mean and flagged.
JudgeVerdict parse_verdict(const std::string& reply_text);

struct JudgeOutcome {
  std::string id;
  std::optional<JudgeVerdict> verdict;
  std::string error;  // empty on success
  bool from_cache = false;
};

struct JudgeOptions {
  std::filesystem::path cache_dir;
  bool include_rubric = true;
};

/// Judges every item, resolving rubrics by wafer_id. Replies are cached by
/// hash(model, prompt-version, prompt); cached entries are never re-fetched.
/// Failures become per-item errors and the run continues. Requests run
/// concurrently up to profile.max_in_flight.
std::vector<JudgeOutcome> judge_items(const std::vector<scoring::EvalItem>& items,
                                      const scoring::RubricLookup& rubrics,
                                      const transport::TransportProfile& profile,
                                      transport::ChatTransport& transport,
                                      const JudgeOptions& options);

util::ordered_json outcome_to_json(const JudgeOutcome& outcome);

}  // namespace wafersage::judge
