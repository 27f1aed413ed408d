// SPDX-License-Identifier: Apache-2.0
#include "wafersage/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wafersage/errors.hpp"

namespace wafersage::scoring {

std::optional<PenaltyType> penalty_type_from_string(std::string_view s) {
  if (s == "linear") return PenaltyType::Linear;
  if (s == "quadratic") return PenaltyType::Quadratic;
  return std::nullopt;
}

EvalConfig EvalConfig::table1_optimized() {
  EvalConfig c;
  c.hit_weight = 0.900;
  c.avoid_weight = 0.100;
  c.fuzzy_threshold = 0.713;
  c.penalty_type = PenaltyType::Linear;
  return c;
}

std::optional<EvalConfig> EvalConfig::preset(std::string_view name) {
  if (name == "default") return defaults();
  if (name == "table1-optimized") return table1_optimized();
  return std::nullopt;
}

std::array<double, 3> EvalConfig::effective_dimension_weights() const {
  const double ws = weight_spatial * scale_spatial;
  const double wm = weight_morphology * scale_morphology;
  const double wr = weight_root_cause * scale_root_cause;
  const double total = ws + wm + wr;
  if (total <= 0.0) throw Error("dimension weights must have a positive sum");
  return {ws / total, wm / total, wr / total};
}

void EvalConfig::validate() const {
  if (hit_weight < 0.0 || avoid_weight < 0.0) {
    throw Error("hit_weight and avoid_weight must be nonnegative");
  }
  if (std::abs(hit_weight + avoid_weight - 1.0) > 1e-9) {
    throw Error("hit_weight + avoid_weight must equal 1");
  }
  if (!(fuzzy_threshold > 0.0 && fuzzy_threshold <= 1.0)) {
    throw Error("fuzzy_threshold must lie in (0, 1]");
  }
  if (penalty_rate < 0.0) throw Error("penalty_rate must be nonnegative");
  if (hit_slope < 0.0) throw Error("hit_slope must be nonnegative");
  if (weight_spatial < 0.0 || weight_morphology < 0.0 || weight_root_cause < 0.0 ||
      scale_spatial < 0.0 || scale_morphology < 0.0 || scale_root_cause < 0.0) {
    throw Error("dimension weights and scales must be nonnegative");
  }
  effective_dimension_weights();  // throws when the sum is not positive
}

util::ordered_json EvalConfig::to_json() const {
  util::ordered_json j = util::ordered_json::object();
  j["hit_weight"] = hit_weight;
  j["avoid_weight"] = avoid_weight;
  j["fuzzy_threshold"] = fuzzy_threshold;
  j["penalty_type"] = std::string(to_string(penalty_type));
  j["penalty_rate"] = penalty_rate;
  j["hit_slope"] = hit_slope;
  j["dimension_weights"] = {{"spatial", weight_spatial},
                            {"morphology", weight_morphology},
                            {"root_cause", weight_root_cause}};
  j["dimension_scale"] = {{"spatial", scale_spatial},
                          {"morphology", scale_morphology},
                          {"root_cause", scale_root_cause}};
  return j;
}

EvalConfig EvalConfig::from_json(const util::ordered_json& j) {
  if (!j.is_object()) throw Error("eval config must be a JSON object");
  EvalConfig c;
  bool have_hit = false;
  bool have_avoid = false;
  if (j.contains("hit_weight")) {
    c.hit_weight = j.at("hit_weight").get<double>();
    have_hit = true;
  }
  if (j.contains("avoid_weight")) {
    c.avoid_weight = j.at("avoid_weight").get<double>();
    have_avoid = true;
  }
  if (have_hit && !have_avoid) c.avoid_weight = 1.0 - c.hit_weight;
  if (have_avoid && !have_hit) c.hit_weight = 1.0 - c.avoid_weight;
  if (j.contains("fuzzy_threshold")) c.fuzzy_threshold = j.at("fuzzy_threshold").get<double>();
  if (j.contains("penalty_type")) {
    const auto p = penalty_type_from_string(j.at("penalty_type").get<std::string>());
    if (!p) throw Error("penalty_type must be \"linear\" or \"quadratic\"");
    c.penalty_type = *p;
  }
  if (j.contains("penalty_rate")) c.penalty_rate = j.at("penalty_rate").get<double>();
  if (j.contains("hit_slope")) c.hit_slope = j.at("hit_slope").get<double>();
  if (j.contains("dimension_weights")) {
    const auto& w = j.at("dimension_weights");
    if (w.contains("spatial")) c.weight_spatial = w.at("spatial").get<double>();
    if (w.contains("morphology")) c.weight_morphology = w.at("morphology").get<double>();
    if (w.contains("root_cause")) c.weight_root_cause = w.at("root_cause").get<double>();
  }
  if (j.contains("dimension_scale")) {
    const auto& s = j.at("dimension_scale");
    if (s.contains("spatial")) c.scale_spatial = s.at("spatial").get<double>();
    if (s.contains("morphology")) c.scale_morphology = s.at("morphology").get<double>();
    if (s.contains("root_cause")) c.scale_root_cause = s.at("root_cause").get<double>();
  }
  c.validate();
  return c;
}

std::string EvalConfig::canonical_hash() const { return util::sha256_hex(to_json().dump()); }

double hit_score(double coverage, double hit_slope) {
  if (!(coverage >= 0.0 && coverage <= 1.0)) {
    throw std::domain_error("coverage must lie in [0, 1]");
  }
  return std::min(1.0, hit_slope * coverage);
}

double avoid_score(int false_terms, PenaltyType penalty_type, double penalty_rate) {
  if (false_terms < 0) throw std::domain_error("false_terms must be nonnegative");
  const double n = static_cast<double>(false_terms);
  const double penalty =
      penalty_type == PenaltyType::Linear ? penalty_rate * n : penalty_rate * n * n;
  return std::max(0.0, 1.0 - penalty);
}

double dimension_score(double hit, double avoid, const EvalConfig& config) {
  return config.hit_weight * hit + config.avoid_weight * avoid;
}

double overall_score(double d_spatial, double d_morphology, double d_root_cause,
                     const EvalConfig& config) {
  const auto w = config.effective_dimension_weights();
  return w[0] * d_spatial + w[1] * d_morphology + w[2] * d_root_cause;
}

const DimensionScore& OverallReport::dimension(Dimension d) const {
  switch (d) {
    case Dimension::Spatial:
      return dimensions[0];
    case Dimension::Morphology:
      return dimensions[1];
    case Dimension::RootCause:
      return dimensions[2];
  }
  return dimensions[0];
}

OverallReport evaluate_response(std::string_view response, const rubric::Rubric& rubric,
                                const EvalConfig& config) {
  OverallReport report;
  report.config = config;
  report.rubric_id = rubric.wafer_id;

  const std::string norm_response = matching::normalize(response);

  for (std::size_t i = 0; i < kAllDimensions.size(); ++i) {
    const Dimension dim = kAllDimensions[i];
    const rubric::RubricBucket& bucket = rubric.bucket(dim);

    std::vector<std::string> hits;
    hits.reserve(bucket.must_hit.size());
    for (const auto& kw : bucket.must_hit) hits.push_back(matching::normalize(kw));
    std::vector<std::string> avoids;
    avoids.reserve(bucket.must_avoid.size());
    for (const auto& kw : bucket.must_avoid) avoids.push_back(matching::normalize(kw));

    DimensionScore d;
    d.dimension = dim;
    auto cov = matching::count_coverage(norm_response, hits, config.fuzzy_threshold);
    auto av = matching::count_avoids(norm_response, avoids, config.fuzzy_threshold);
    d.coverage = cov.coverage;
    d.hit = hit_score(d.coverage, config.hit_slope);
    d.false_terms = av.false_terms;
    d.avoid = avoid_score(d.false_terms, config.penalty_type, config.penalty_rate);
    d.score = dimension_score(d.hit, d.avoid, config);
    d.hit_evidence = std::move(cov.evidence);
    d.avoid_evidence = std::move(av.evidence);
    report.dimensions[i] = std::move(d);
  }

  report.overall = overall_score(report.dimensions[0].score, report.dimensions[1].score,
                                 report.dimensions[2].score, config);
  return report;
}

EvalItem eval_item_from_json(const util::ordered_json& j) {
  if (!j.is_object()) throw FormatError("evaluation item must be a JSON object");
  EvalItem item;
  if (j.contains("id")) {
    const auto& id = j.at("id");
    item.id = id.is_string() ? id.get<std::string>() : id.dump();
  }
  if (j.contains("wafer_id") && j.at("wafer_id").is_string()) {
    item.wafer_id = j.at("wafer_id").get<std::string>();
  }
  if (j.contains("dimension") && j.at("dimension").is_string()) {
    item.dimension = dimension_from_string(j.at("dimension").get<std::string>());
  }
  if (j.contains("question") && j.at("question").is_string()) {
    item.question = j.at("question").get<std::string>();
  }
  if (j.contains("response") && j.at("response").is_string()) {
    item.response = j.at("response").get<std::string>();
  }
  return item;
}

DatasetReport evaluate_dataset(std::vector<EvalItem> items, const RubricLookup& rubrics,
                               const EvalConfig& config) {
  config.validate();
  std::stable_sort(items.begin(), items.end(),
                   [](const EvalItem& a, const EvalItem& b) { return a.id < b.id; });

  DatasetReport report;
  report.items.reserve(items.size());

  double sum_overall = 0.0;
  std::array<double, 3> sum_dimension = {0.0, 0.0, 0.0};
  double sum_tagged = 0.0;
  std::size_t tagged_count = 0;

  for (const EvalItem& item : items) {
    ItemResult result;
    result.id = item.id;
    result.wafer_id = item.wafer_id;
    result.dimension = item.dimension;

    const rubric::Rubric* r = rubrics(item.wafer_id);
    if (r == nullptr) {
      result.error = "no rubric for wafer_id \"" + item.wafer_id + "\"";
      ++report.failed;
    } else {
      OverallReport rep = evaluate_response(item.response, *r, config);
      rep.response_id = item.id;
      sum_overall += rep.overall;
      for (std::size_t i = 0; i < 3; ++i) sum_dimension[i] += rep.dimensions[i].score;
      if (item.dimension) {
        sum_tagged += rep.dimension(*item.dimension).score;
        ++tagged_count;
      }
      result.report = std::move(rep);
      ++report.scored;
    }
    report.items.push_back(std::move(result));
  }

  if (report.scored > 0) {
    const double n = static_cast<double>(report.scored);
    report.mean_overall = sum_overall / n;
    report.mean_dimension = {sum_dimension[0] / n, sum_dimension[1] / n, sum_dimension[2] / n};
  }
  if (tagged_count > 0) {
    report.mean_tagged = sum_tagged / static_cast<double>(tagged_count);
  }
  return report;
}

namespace {

double round4(double x) { return std::round(x * 10000.0) / 10000.0; }

util::ordered_json evidence_to_json(const std::vector<matching::MatchEvidence>& evidence) {
  util::ordered_json arr = util::ordered_json::array();
  for (const auto& ev : evidence) {
    arr.push_back({{"keyword", ev.keyword},
                   {"matched", ev.matched},
                   {"similarity", round4(ev.similarity)},
                   {"span", {ev.span_begin, ev.span_end}}});
  }
  return arr;
}

}  // namespace

util::ordered_json item_result_to_json(const ItemResult& r, bool with_evidence) {
  util::ordered_json j = util::ordered_json::object();
  j["id"] = r.id;
  j["wafer_id"] = r.wafer_id;
  if (r.dimension) j["dimension"] = std::string(to_string(*r.dimension));
  if (!r.error.empty()) {
    j["error"] = r.error;
    return j;
  }
  const OverallReport& rep = *r.report;
  j["overall"] = round4(rep.overall);
  if (r.dimension) j["tagged_score"] = round4(rep.dimension(*r.dimension).score);
  util::ordered_json dims = util::ordered_json::object();
  for (const DimensionScore& d : rep.dimensions) {
    util::ordered_json dj = util::ordered_json::object();
    dj["coverage"] = round4(d.coverage);
    dj["hit"] = round4(d.hit);
    dj["false_terms"] = d.false_terms;
    dj["avoid"] = round4(d.avoid);
    dj["score"] = round4(d.score);
    if (with_evidence) {
      dj["hit_evidence"] = evidence_to_json(d.hit_evidence);
      dj["avoid_evidence"] = evidence_to_json(d.avoid_evidence);
    }
    dims[std::string(to_string(d.dimension))] = std::move(dj);
  }
  j["dimensions"] = std::move(dims);
  return j;
}

util::ordered_json dataset_summary_to_json(const DatasetReport& report) {
  util::ordered_json j = util::ordered_json::object();
  j["items"] = report.items.size();
  j["scored"] = report.scored;
  j["failed"] = report.failed;
  if (report.mean_overall) j["mean_overall"] = round4(*report.mean_overall);
  if (report.mean_dimension) {
    j["mean_dimension"] = {{"spatial", round4((*report.mean_dimension)[0])},
                           {"morphology", round4((*report.mean_dimension)[1])},
                           {"root_cause", round4((*report.mean_dimension)[2])}};
  }
  if (report.mean_tagged) j["mean_tagged"] = round4(*report.mean_tagged);
  return j;
}

}  // namespace wafersage::scoring
