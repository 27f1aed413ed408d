// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "wafersage/errors.hpp"
#include "wafersage/rubric.hpp"
#include "wafersage/util.hpp"

using namespace wafersage;

namespace {

std::string fixture(const char* name) {
  return util::read_file(std::filesystem::path(WAFERSAGE_FIXTURES_DIR) / name);
}

}  // namespace

TEST_SUITE_BEGIN("rubric");

TEST_CASE("parses the multi-modal example rubric") {
  const rubric::Rubric r = rubric::parse_rubric(fixture("rubric_multimodal.json"));

  CHECK(r.defect_types == std::vector<std::string>{"Center", "Edge-Ring", "Loc", "Scratch"});
  CHECK(std::find(r.spatial.must_avoid.begin(), r.spatial.must_avoid.end(),
                  "top-right quadrant") != r.spatial.must_avoid.end());

  // zone + distribution + clock_position + coordinates_hint, deduplicated
  CHECK(std::find(r.spatial.must_hit.begin(), r.spatial.must_hit.end(), "lower hemisphere") !=
        r.spatial.must_hit.end());
  CHECK(std::count(r.spatial.must_hit.begin(), r.spatial.must_hit.end(), "lower hemisphere") ==
        1);
  CHECK(r.morphology.must_hit.size() == 10);
  CHECK(r.root_cause.must_avoid ==
        std::vector<std::string>{"photolithography misalignment", "over-etch"});
  CHECK_FALSE(r.summary.has_value());  // the appendix example carries no summary
}

TEST_CASE("rejects degenerate inputs") {
  CHECK_THROWS_AS(rubric::parse_rubric("not json at all"), SchemaError);
  CHECK_THROWS_AS(rubric::parse_rubric("[1,2,3]"), SchemaError);

  auto j = util::ordered_json::parse(fixture("rubric_multimodal.json"));
  j["defect_types"] = util::ordered_json::array();
  CHECK_THROWS_AS(rubric::rubric_from_json(j), SchemaError);

  auto missing = util::ordered_json::parse(fixture("rubric_multimodal.json"));
  missing.erase("morphology_rubric");
  CHECK_THROWS_AS(rubric::rubric_from_json(missing), SchemaError);

  auto wrong_type = util::ordered_json::parse(fixture("rubric_multimodal.json"));
  wrong_type["spatial_rubric"]["zone"] = 7;
  CHECK_THROWS_AS(rubric::rubric_from_json(wrong_type), SchemaError);

  auto empty_bucket = util::ordered_json::parse(fixture("rubric_multimodal.json"));
  empty_bucket["spatial_rubric"] = {{"zone", ""},
                                    {"spatial_avoid", util::ordered_json::array()}};
  CHECK_THROWS_AS(rubric::rubric_from_json(empty_bucket), EmptyRubricError);
}

TEST_CASE("unknown fields are preserved and ignored for scoring") {
  auto j = util::ordered_json::parse(fixture("rubric_multimodal.json"));
  j["version"] = 2;
  j["spatial_rubric"]["custom_note"] = "resist ring, inner band";

  const rubric::Rubric r = rubric::rubric_from_json(j);
  CHECK(r.extra.at("version") == 2);
  // the unknown bucket field contributed no keywords
  CHECK(std::find(r.spatial.must_hit.begin(), r.spatial.must_hit.end(), "resist ring") ==
        r.spatial.must_hit.end());
  // but survives serialization
  const auto round = rubric::to_json(r);
  CHECK(round.at("version") == 2);
  CHECK(round.at("spatial_rubric").at("custom_note") == "resist ring, inner band");
}

TEST_CASE("extract_keywords splits on commas, trims, lowercases, dedups") {
  util::ordered_json fields = util::ordered_json::object();
  fields["zone"] = "Center, Edge, Mid-radius, Lower hemisphere";
  auto lists = rubric::extract_keywords(fields);
  CHECK(lists.must_hit ==
        std::vector<std::string>{"center", "edge", "mid-radius", "lower hemisphere"});

  util::ordered_json empty = util::ordered_json::object();
  empty["zone"] = "";
  CHECK(rubric::extract_keywords(empty).must_hit.empty());

  util::ordered_json dup = util::ordered_json::object();
  dup["potential_causes"] = {"Non-uniformity in wet process", "Non-uniformity in wet process"};
  CHECK(rubric::extract_keywords(dup).must_hit ==
        std::vector<std::string>{"non-uniformity in wet process"});

  util::ordered_json avoid = util::ordered_json::object();
  avoid["spatial_avoid"] = "Top-right quadrant, Uniform distribution";
  auto av = rubric::extract_keywords(avoid);
  CHECK(av.must_hit.empty());
  CHECK(av.must_avoid == std::vector<std::string>{"top-right quadrant", "uniform distribution"});
}

TEST_CASE("extract_keywords is idempotent on already-extracted lists") {
  auto j = util::ordered_json::parse(fixture("rubric_multimodal.json"));
  const rubric::Rubric r = rubric::rubric_from_json(j);
  for (Dimension d : kAllDimensions) {
    util::ordered_json fields = util::ordered_json::object();
    fields["zone"] = r.bucket(d).must_hit;  // list values are taken element-wise
    CHECK(rubric::extract_keywords(fields).must_hit == r.bucket(d).must_hit);
  }
}

TEST_CASE("validator flags overlaps, unknown labels and thin buckets") {
  const rubric::Rubric clean = rubric::parse_rubric(fixture("rubric_multimodal.json"));
  CHECK(rubric::validate_rubric(clean).empty());

  auto j = util::ordered_json::parse(fixture("rubric_multimodal.json"));
  j["morphology_rubric"]["pattern_type"] = "Circular, Amorphous blob";
  const auto overlap_warnings = rubric::validate_rubric(rubric::rubric_from_json(j));
  REQUIRE_FALSE(overlap_warnings.empty());
  CHECK(overlap_warnings.front().find("circular") != std::string::npos);

  auto unknown = util::ordered_json::parse(fixture("rubric_multimodal.json"));
  unknown["defect_types"] = {"Zorp"};
  const auto label_warnings = rubric::validate_rubric(rubric::rubric_from_json(unknown));
  REQUIRE(label_warnings.size() == 1);
  CHECK(label_warnings.front() == "unknown defect label: Zorp");

  auto thin = util::ordered_json::parse(fixture("rubric_multimodal.json"));
  thin["spatial_rubric"] = {{"zone", "Center"}};
  const auto thin_warnings = rubric::validate_rubric(rubric::rubric_from_json(thin));
  REQUIRE(thin_warnings.size() == 1);
  CHECK(thin_warnings.front().find("fewer than 2") != std::string::npos);
}

TEST_CASE("defect labels compare case- and hyphen-insensitively") {
  CHECK(rubric::defect_labels_equivalent("Edge-Ring", "edge ring"));
  CHECK(rubric::defect_labels_equivalent("Edge-Ring", "EDGERING"));
  CHECK(rubric::defect_labels_equivalent("Near-full", "near full"));
  CHECK_FALSE(rubric::defect_labels_equivalent("Edge-Ring", "Edge-Loc"));
}

TEST_CASE("parse -> serialize -> parse is identity on the scored fields") {
  const rubric::Rubric a = rubric::parse_rubric(fixture("rubric_multimodal.json"));
  const rubric::Rubric b = rubric::rubric_from_json(rubric::to_json(a));
  for (Dimension d : kAllDimensions) {
    CHECK(a.bucket(d).must_hit == b.bucket(d).must_hit);
    CHECK(a.bucket(d).must_avoid == b.bucket(d).must_avoid);
    CHECK(a.bucket(d).dimension == b.bucket(d).dimension);
  }
  CHECK(a.defect_types == b.defect_types);
}

TEST_CASE("rubric sets load from JSONL keyed by wafer_id") {
  const auto dir = std::filesystem::temp_directory_path() / "wafersage_rubric_test";
  std::filesystem::create_directories(dir);

  auto j = util::ordered_json::parse(fixture("rubric_multimodal.json"));
  j["wafer_id"] = "w1";
  auto j2 = j;
  j2["wafer_id"] = "w2";
  util::write_file_atomic(dir / "rubrics.jsonl", j.dump() + "\n" + j2.dump() + "\n");

  const rubric::RubricSet set = rubric::load_rubrics(dir / "rubrics.jsonl");
  CHECK(set.size() == 2);
  REQUIRE(set.find("w1") != nullptr);
  CHECK(set.find("w1")->wafer_id == "w1");
  CHECK(set.find("missing") == nullptr);

  // single-object files fall back to the file stem as the id
  util::write_file_atomic(dir / "solo.json",
                          fixture("rubric_multimodal.json"));
  const rubric::RubricSet solo = rubric::load_rubrics(dir / "solo.json");
  CHECK(solo.size() == 1);
  CHECK(solo.find("solo") != nullptr);

  std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
