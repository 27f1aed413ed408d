// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wafersage/judge.hpp"
#include "wafersage/rubric.hpp"
#include "wafersage/scoring.hpp"
#include "wafersage/types.hpp"

namespace wafersage::alignment {

/// Average ranks (1-based); ties receive the mean of their rank positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman rank correlation with average-rank tie handling. Throws
/// DegenerateInputError for length < 2 or a constant vector on either side.
double spearman(std::span<const double> x, std::span<const double> y);

/// Which rule-based score is paired with which judge score.
enum class ObjectiveMode { Overall, Spatial, Morphology, RootCause };

struct AlignmentItem {
  std::string id;
  std::string response;
  const rubric::Rubric* rubric = nullptr;
  std::optional<Dimension> dimension;
  judge::JudgeVerdict verdict;
};

/// Holds the items plus per-keyword best similarities, precomputed once so
/// that re-scoring under a new config is a cheap thresholding pass. The
/// resulting objective is identical to running scoring::evaluate_response
/// per item (covered by a consistency test).
class AlignmentDataset {
 public:
  /// Throws DegenerateInputError for fewer than 3 items or a constant judge
  /// vector in the requested pairing.
  static AlignmentDataset build(std::vector<AlignmentItem> items);

  std::size_t size() const { return items_.size(); }
  const std::vector<AlignmentItem>& items() const { return items_; }

  /// Rule-based scores for every item under the given config.
  std::vector<double> rule_scores(const scoring::EvalConfig& config, ObjectiveMode mode) const;
  std::vector<double> judge_scores(ObjectiveMode mode) const;

 private:
  struct BucketSims {
    std::vector<double> hit;    // best similarity per must-hit keyword
    std::vector<double> avoid;  // best similarity per distinct must-avoid keyword
  };
  std::vector<AlignmentItem> items_;
  std::vector<std::array<BucketSims, 3>> sims_;  // per item, per dimension
};

/// Spearman correlation between rule scores under `config` and judge scores.
/// Throws DegenerateInputError when either vector is constant.
double alignment_objective(const scoring::EvalConfig& config, const AlignmentDataset& dataset,
                           ObjectiveMode mode = ObjectiveMode::Overall);

/// Search bounds over Table-1 style parameters; avoid_weight is always
/// 1 - hit_weight.
struct SearchSpace {
  double hit_weight_min = 0.0, hit_weight_max = 1.0;
  double fuzzy_threshold_min = 0.5, fuzzy_threshold_max = 0.95;
  double penalty_rate_min = 0.05, penalty_rate_max = 0.5;
  double dimension_scale_min = 0.5, dimension_scale_max = 2.0;
  std::vector<scoring::PenaltyType> penalty_types = {scoring::PenaltyType::Linear,
                                                     scoring::PenaltyType::Quadratic};
};

struct TraceEntry {
  scoring::EvalConfig config;
  double objective = 0.0;
  double best_so_far = 0.0;
};

struct OptimizationTrace {
  std::vector<TraceEntry> entries;
  std::uint64_t seed = 0;
  int budget = 0;
};

struct OptimizeResult {
  scoring::EvalConfig best;
  double best_objective = 0.0;
  OptimizationTrace trace;
};

/// Sequential model-based maximization of the alignment objective: a random
/// initial design (one quarter of the budget) followed by proposals sampled
/// from a density model of the best-observed region (TPE-style). Configs whose
/// objective is degenerate (constant rule scores) record objective -1.
/// Reproducible for a fixed seed. Requires budget >= 10.
OptimizeResult optimize(const SearchSpace& space, const AlignmentDataset& dataset, int budget,
                        std::uint64_t seed, ObjectiveMode mode = ObjectiveMode::Overall);

util::ordered_json trace_entry_to_json(const TraceEntry& entry, int index);

}  // namespace wafersage::alignment
