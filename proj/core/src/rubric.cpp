// SPDX-License-Identifier: Apache-2.0
#include "wafersage/rubric.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include "wafersage/errors.hpp"
#include "wafersage/matching.hpp"

namespace wafersage::rubric {

namespace {

struct BucketSchema {
  Dimension dimension;
  const char* key;
  std::vector<const char*> fields;  // known fields, *_avoid included
};

const std::array<BucketSchema, 3>& bucket_schemas() {
  static const std::array<BucketSchema, 3> schemas = {{
      {Dimension::Spatial,
       "spatial_rubric",
       {"zone", "distribution", "clock_position", "coordinates_hint", "spatial_avoid"}},
      {Dimension::Morphology,
       "morphology_rubric",
       {"pattern_type", "density", "geometric_structure", "texture_description",
        "morphology_avoid"}},
      {Dimension::RootCause,
       "root_cause_rubric",
       {"equipment_category", "process_step", "potential_causes", "root_cause_avoid"}},
  }};
  return schemas;
}

bool is_avoid_field(std::string_view name) {
  return name.size() >= 6 && name.substr(name.size() - 6) == "_avoid";
}

std::string clean_keyword(std::string_view s) { return util::to_lower(util::trim(s)); }

void append_unique(std::vector<std::string>& out, std::unordered_set<std::string>& seen,
                   std::string kw) {
  if (kw.empty()) return;
  if (seen.insert(kw).second) out.push_back(std::move(kw));
}

}  // namespace

const std::vector<std::string>& canonical_defect_labels() {
  static const std::vector<std::string> labels = {"Center", "Donut",  "Edge-Ring",
                                                  "Edge-Loc", "Loc",   "Scratch",
                                                  "Random", "Near-full", "None"};
  return labels;
}

std::string defect_label_key(std::string_view label) {
  std::string key;
  key.reserve(label.size());
  for (unsigned char c : label) {
    if (std::isalnum(c)) key.push_back(static_cast<char>(std::tolower(c)));
  }
  return key;
}

bool defect_labels_equivalent(std::string_view a, std::string_view b) {
  return defect_label_key(a) == defect_label_key(b);
}

const RubricBucket& Rubric::bucket(Dimension d) const {
  switch (d) {
    case Dimension::Spatial:
      return spatial;
    case Dimension::Morphology:
      return morphology;
    case Dimension::RootCause:
      return root_cause;
  }
  return spatial;
}

RubricBucket& Rubric::bucket(Dimension d) {
  return const_cast<RubricBucket&>(std::as_const(*this).bucket(d));
}

std::size_t Rubric::total_must_hit() const {
  return spatial.must_hit.size() + morphology.must_hit.size() + root_cause.must_hit.size();
}

KeywordLists extract_keywords(const util::ordered_json& raw_fields) {
  KeywordLists out;
  std::unordered_set<std::string> seen_hit;
  std::unordered_set<std::string> seen_avoid;
  if (!raw_fields.is_object()) return out;
  for (const auto& [name, value] : raw_fields.items()) {
    const bool avoid = is_avoid_field(name);
    auto& list = avoid ? out.must_avoid : out.must_hit;
    auto& seen = avoid ? seen_avoid : seen_hit;
    if (value.is_string()) {
      const std::string s = value.get<std::string>();
      std::size_t pos = 0;
      while (pos <= s.size()) {
        const std::size_t comma = s.find(',', pos);
        const std::size_t end = (comma == std::string::npos) ? s.size() : comma;
        append_unique(list, seen, clean_keyword(std::string_view(s).substr(pos, end - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    } else if (value.is_array()) {
      for (const auto& el : value) {
        if (el.is_string()) append_unique(list, seen, clean_keyword(el.get<std::string>()));
      }
    }
    // other value types carry no keywords
  }
  return out;
}

namespace {

RubricBucket parse_bucket(const util::ordered_json& obj, const BucketSchema& schema) {
  if (!obj.contains(schema.key)) {
    throw SchemaError(std::string("missing required bucket: ") + schema.key);
  }
  const auto& raw = obj.at(schema.key);
  if (!raw.is_object()) {
    throw SchemaError(std::string(schema.key) + " must be a JSON object");
  }

  // Type-check known fields; unknown fields are preserved but not scored.
  util::ordered_json scored = util::ordered_json::object();
  for (const auto& [name, value] : raw.items()) {
    const bool known =
        std::find_if(schema.fields.begin(), schema.fields.end(),
                     [&](const char* f) { return name == f; }) != schema.fields.end();
    if (!known) continue;
    if (value.is_string()) {
      scored[name] = value;
    } else if (value.is_array()) {
      for (const auto& el : value) {
        if (!el.is_string()) {
          throw SchemaError(std::string(schema.key) + "." + name +
                            " must contain only strings");
        }
      }
      scored[name] = value;
    } else {
      throw SchemaError(std::string(schema.key) + "." + name +
                        " must be a string or a list of strings");
    }
  }

  RubricBucket bucket;
  bucket.dimension = schema.dimension;
  bucket.raw_fields = raw;
  KeywordLists kw = extract_keywords(scored);
  bucket.must_hit = std::move(kw.must_hit);
  bucket.must_avoid = std::move(kw.must_avoid);
  if (bucket.must_hit.empty()) {
    throw EmptyRubricError(std::string("no must-hit keywords extractable from ") + schema.key);
  }
  return bucket;
}

}  // namespace

Rubric rubric_from_json(const util::ordered_json& j) {
  if (!j.is_object()) throw SchemaError("rubric must be a JSON object");

  Rubric r;
  if (j.contains("wafer_id")) {
    if (!j.at("wafer_id").is_string()) throw SchemaError("wafer_id must be a string");
    r.wafer_id = j.at("wafer_id").get<std::string>();
  }

  if (!j.contains("defect_types") || !j.at("defect_types").is_array()) {
    throw SchemaError("defect_types must be a JSON array");
  }
  for (const auto& el : j.at("defect_types")) {
    if (!el.is_string()) throw SchemaError("defect_types must contain only strings");
    const std::string label = util::trim(el.get<std::string>());
    if (!label.empty()) r.defect_types.push_back(label);
  }
  if (r.defect_types.empty()) throw SchemaError("defect_types must be non-empty");

  for (const auto& schema : bucket_schemas()) {
    r.bucket(schema.dimension) = parse_bucket(j, schema);
  }

  if (j.contains("summary")) {
    if (!j.at("summary").is_string()) throw SchemaError("summary must be a string");
    r.summary = j.at("summary").get<std::string>();
  }

  static const std::unordered_set<std::string> known_top = {
      "wafer_id", "defect_types", "spatial_rubric", "morphology_rubric", "root_cause_rubric",
      "summary"};
  for (const auto& [name, value] : j.items()) {
    if (!known_top.count(name)) r.extra[name] = value;
  }
  return r;
}

Rubric parse_rubric(std::string_view json_text) {
  util::ordered_json j;
  try {
    j = util::ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return rubric_from_json(j);
}

util::ordered_json to_json(const Rubric& r) {
  util::ordered_json j = util::ordered_json::object();
  if (!r.wafer_id.empty()) j["wafer_id"] = r.wafer_id;
  j["defect_types"] = r.defect_types;
  j["spatial_rubric"] = r.spatial.raw_fields;
  j["morphology_rubric"] = r.morphology.raw_fields;
  j["root_cause_rubric"] = r.root_cause.raw_fields;
  if (r.summary) j["summary"] = *r.summary;
  for (const auto& [name, value] : r.extra.items()) j[name] = value;
  return j;
}

std::vector<std::string> validate_rubric(const Rubric& r) {
  std::vector<std::string> warnings;

  for (Dimension d : kAllDimensions) {
    const RubricBucket& b = r.bucket(d);
    std::unordered_set<std::string> avoid_norm;
    for (const auto& kw : b.must_avoid) avoid_norm.insert(matching::normalize(kw));
    for (const auto& kw : b.must_hit) {
      if (avoid_norm.count(matching::normalize(kw))) {
        warnings.push_back(std::string(to_string(d)) + ": keyword \"" + kw +
                           "\" appears in both must_hit and must_avoid");
      }
    }
    if (b.must_hit.size() < 2) {
      warnings.push_back(std::string(to_string(d)) + ": fewer than 2 must-hit keywords");
    }
  }

  for (const auto& label : r.defect_types) {
    const bool known = std::any_of(
        canonical_defect_labels().begin(), canonical_defect_labels().end(),
        [&](const std::string& c) { return defect_labels_equivalent(c, label); });
    if (!known) warnings.push_back("unknown defect label: " + label);
  }
  return warnings;
}

void RubricSet::add(Rubric r) {
  const std::string id = r.wafer_id;
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    ids_.push_back(id);
    by_id_.emplace(id, std::move(r));
  } else {
    it->second = std::move(r);  // last one wins on duplicate ids
  }
}

const Rubric* RubricSet::find(const std::string& wafer_id) const {
  auto it = by_id_.find(wafer_id);
  return it == by_id_.end() ? nullptr : &it->second;
}

RubricSet load_rubrics(const std::filesystem::path& path) {
  const std::string content = util::read_file(path);
  RubricSet set;

  // Whole-file object first (possibly pretty-printed), JSONL otherwise.
  {
    util::ordered_json j = util::ordered_json::parse(content, nullptr, false);
    if (!j.is_discarded() && j.is_object()) {
      Rubric r = rubric_from_json(j);
      if (r.wafer_id.empty()) r.wafer_id = path.stem().string();
      set.add(std::move(r));
      return set;
    }
  }

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const std::size_t nl = content.find('\n', pos);
    const std::size_t end = (nl == std::string::npos) ? content.size() : nl;
    const std::string line = util::trim(std::string_view(content).substr(pos, end - pos));
    ++lineno;
    if (!line.empty()) {
      util::ordered_json j;
      try {
        j = util::ordered_json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
      if (!(lineno == 1 && util::is_header_line(j))) {
        Rubric r = rubric_from_json(j);
        if (r.wafer_id.empty()) {
          throw SchemaError(path.string() + ":" + std::to_string(lineno) +
                            ": rubric line missing wafer_id");
        }
        set.add(std::move(r));
      }
    }
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  if (set.size() == 0) throw SchemaError(path.string() + ": no rubrics found");
  return set;
}

}  // namespace wafersage::rubric
