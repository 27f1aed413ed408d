// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wafersage/matching.hpp"
#include "wafersage/rubric.hpp"
#include "wafersage/types.hpp"
#include "wafersage/util.hpp"

namespace wafersage::scoring {

enum class PenaltyType { Linear, Quadratic };

constexpr std::string_view to_string(PenaltyType p) {
  return p == PenaltyType::Linear ? "linear" : "quadratic";
}
std::optional<PenaltyType> penalty_type_from_string(std::string_view s);

/// Every tunable scorer parameter. Dimension weights are the base mix; the
/// scale factors are multiplicative per-dimension adjustments applied before
/// renormalization, so the effective weight of dimension i is
/// weight_i * scale_i / sum over all dimensions.
struct EvalConfig {
  double hit_weight = 0.6;
  double avoid_weight = 0.4;
  double fuzzy_threshold = 0.713;
  PenaltyType penalty_type = PenaltyType::Linear;
  double penalty_rate = 0.25;
  double hit_slope = 1.5;
  double weight_spatial = 0.4;
  double weight_morphology = 0.35;
  double weight_root_cause = 0.25;
  double scale_spatial = 1.0;
  double scale_morphology = 1.0;
  double scale_root_cause = 1.0;

  static EvalConfig defaults() { return {}; }
  /// The tuned parameter set: hit_weight 0.900 / avoid_weight 0.100,
  /// threshold 0.713, linear penalty, unit dimension scaling.
  static EvalConfig table1_optimized();
  static std::optional<EvalConfig> preset(std::string_view name);

  /// Renormalized weights in {spatial, morphology, root_cause} order.
  std::array<double, 3> effective_dimension_weights() const;

  /// Throws Error when an invariant is broken (weights must be nonnegative
  /// and hit_weight + avoid_weight must equal 1).
  void validate() const;

  util::ordered_json to_json() const;
  static EvalConfig from_json(const util::ordered_json& j);
  /// SHA-256 of the canonical serialization; pins configs in manifests.
  std::string canonical_hash() const;
};

/// Eq-style primitives. hit_score saturates at full marks once
/// coverage * hit_slope reaches 1.
double hit_score(double coverage, double hit_slope);
double avoid_score(int false_terms, PenaltyType penalty_type, double penalty_rate);
double dimension_score(double hit, double avoid, const EvalConfig& config);
double overall_score(double d_spatial, double d_morphology, double d_root_cause,
                     const EvalConfig& config);

struct DimensionScore {
  Dimension dimension = Dimension::Spatial;
  double coverage = 0.0;  // fraction of must-hit keywords found
  double hit = 0.0;
  int false_terms = 0;  // distinct must-avoid keywords present
  double avoid = 1.0;
  double score = 0.0;
  std::vector<matching::MatchEvidence> hit_evidence;
  std::vector<matching::MatchEvidence> avoid_evidence;
};

struct OverallReport {
  std::array<DimensionScore, 3> dimensions;  // spatial, morphology, root_cause
  double overall = 0.0;
  EvalConfig config;
  std::string rubric_id;
  std::string response_id;

  const DimensionScore& dimension(Dimension d) const;
};

/// Scores one free-text response against all three rubric buckets.
OverallReport evaluate_response(std::string_view response, const rubric::Rubric& rubric,
                                const EvalConfig& config);

struct EvalItem {
  std::string id;
  std::string wafer_id;
  std::optional<Dimension> dimension;  // the question's tagged dimension
  std::string question;
  std::string response;
};

EvalItem eval_item_from_json(const util::ordered_json& j);

struct ItemResult {
  std::string id;
  std::string wafer_id;
  std::optional<Dimension> dimension;
  std::optional<OverallReport> report;
  std::string error;  // empty on success
};

struct DatasetReport {
  std::vector<ItemResult> items;  // sorted by item id
  std::size_t scored = 0;
  std::size_t failed = 0;
  std::optional<double> mean_overall;
  std::optional<std::array<double, 3>> mean_dimension;
  /// Mean of the tagged dimension's score over items carrying a tag.
  std::optional<double> mean_tagged;
};

using RubricLookup = std::function<const rubric::Rubric*(const std::string& wafer_id)>;

/// Scores a whole item list. Items whose rubric cannot be resolved become
/// per-item error entries; the run continues.
DatasetReport evaluate_dataset(std::vector<EvalItem> items, const RubricLookup& rubrics,
                               const EvalConfig& config);

/// JSON row for one scored (or failed) item. Scores round to 4 decimals;
/// evidence spans are included only when with_evidence is set.
util::ordered_json item_result_to_json(const ItemResult& r, bool with_evidence = false);
util::ordered_json dataset_summary_to_json(const DatasetReport& report);

}  // namespace wafersage::scoring
