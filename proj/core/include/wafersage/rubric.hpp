// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wafersage/types.hpp"
#include "wafersage/util.hpp"

namespace wafersage::rubric {

/// Canonical wafer-map defect classes. Labels outside this list are legal but
/// flagged by validate_rubric.
const std::vector<std::string>& canonical_defect_labels();

/// Canonical comparison key for defect labels: case-insensitive and
/// hyphen-insensitive ("Edge-Ring" == "edge ring" == "edgering").
std::string defect_label_key(std::string_view label);

bool defect_labels_equivalent(std::string_view a, std::string_view b);

/// One evaluation bucket: the scored keyword lists plus the original schema
/// fields they were extracted from.
struct RubricBucket {
  Dimension dimension = Dimension::Spatial;
  std::vector<std::string> must_hit;
  std::vector<std::string> must_avoid;
  util::ordered_json raw_fields = util::ordered_json::object();
};

struct Rubric {
  std::string wafer_id;  // empty unless the source record carried one
  std::vector<std::string> defect_types;
  RubricBucket spatial;
  RubricBucket morphology;
  RubricBucket root_cause;
  std::optional<std::string> summary;
  util::ordered_json extra = util::ordered_json::object();  // unknown top-level fields, preserved

  const RubricBucket& bucket(Dimension d) const;
  RubricBucket& bucket(Dimension d);

  /// Total must-hit keyword count across the three buckets.
  std::size_t total_must_hit() const;
};

struct KeywordLists {
  std::vector<std::string> must_hit;
  std::vector<std::string> must_avoid;
};

/// Extracts flat keyword lists from a bucket's raw fields. Comma-separated
/// string values are split on commas; list values are taken element-wise.
/// Everything is trimmed and lowercased, duplicates removed keeping the first
/// occurrence. Fields named *_avoid feed must_avoid, all others must_hit.
KeywordLists extract_keywords(const util::ordered_json& raw_fields);

/// Parses one rubric object. Throws SchemaError on missing buckets or wrong
/// field types and EmptyRubricError when a bucket yields no must-hit keywords.
Rubric parse_rubric(std::string_view json_text);
Rubric rubric_from_json(const util::ordered_json& j);

/// Serializes back to the schema shape; scored fields survive a
/// parse -> serialize -> parse round trip unchanged.
util::ordered_json to_json(const Rubric& r);

/// Non-mutating lint: hit/avoid overlap, unknown defect labels, buckets with
/// fewer than two must-hit keywords.
std::vector<std::string> validate_rubric(const Rubric& r);

/// Rubrics keyed by wafer_id, preserving file order.
class RubricSet {
 public:
  void add(Rubric r);
  const Rubric* find(const std::string& wafer_id) const;
  const std::vector<std::string>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Rubric> by_id_;
};

/// Loads a rubric file: either a single JSON object (wafer_id optional, falls
/// back to the file stem) or JSONL with one rubric per line keyed by wafer_id.
RubricSet load_rubrics(const std::filesystem::path& path);

}  // namespace wafersage::rubric
