// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <map>

#include "support/generators.hpp"
#include "wafersage/curriculum.hpp"
#include "wafersage/errors.hpp"
#include "wafersage/util.hpp"

using namespace wafersage;

namespace {

rubric::Rubric example_rubric() {
  return rubric::parse_rubric(
      util::read_file(std::filesystem::path(WAFERSAGE_FIXTURES_DIR) / "rubric_multimodal.json"));
}

curriculum::TrainingExample make_example(const std::string& id, bool seen, double difficulty) {
  curriculum::TrainingExample ex;
  ex.example_id = id;
  ex.wafer_id = "w-" + id;
  ex.seen_in_sft = seen;
  ex.difficulty = difficulty;
  return ex;
}

void check_schedule_invariants(const curriculum::Schedule& schedule,
                               const std::vector<curriculum::TrainingExample>& examples) {
  std::map<std::string, const curriculum::TrainingExample*> by_id;
  for (const auto& ex : examples) by_id[ex.example_id] = &ex;

  REQUIRE(schedule.entries.size() == examples.size());
  std::map<std::string, int> seen_count;
  bool in_learning = false;
  double last_difficulty[2] = {-1.0, -1.0};
  for (const auto& entry : schedule.entries) {
    ++seen_count[entry.example_id];
    const bool learning = entry.phase == curriculum::Phase::Learning;
    if (learning) in_learning = true;
    REQUIRE(in_learning == learning);  // review strictly precedes learning
    const auto* ex = by_id.at(entry.example_id);
    CHECK(ex->seen_in_sft == (entry.phase == curriculum::Phase::Review));
    double& last = last_difficulty[learning ? 1 : 0];
    CHECK(ex->difficulty >= last);
    last = ex->difficulty;
  }
  for (const auto& ex : examples) {
    CHECK(seen_count[ex.example_id] == 1);  // exactly-once coverage
  }
}

}  // namespace

TEST_SUITE_BEGIN("curriculum");

TEST_CASE("difficulty comes from the baseline when present, else the keyword proxy") {
  const rubric::Rubric r = example_rubric();
  curriculum::TrainingExample ex = make_example("e1", false, 0.0);

  CHECK(curriculum::compute_difficulty(ex, 1.0, &r) == 0.0);
  CHECK(curriculum::compute_difficulty(ex, 0.25, &r) == 0.75);

  // proxy: total must-hit keywords / 20, capped at 1
  std::array<std::vector<std::string>, 3> hits = {
      std::vector<std::string>{"a1", "a2", "a3"},
      std::vector<std::string>{"b1", "b2", "b3"},
      std::vector<std::string>{"c1", "c2", "c3", "c4"}};
  std::array<std::vector<std::string>, 3> avoids = {};
  const rubric::Rubric ten = gen::make_rubric("w", hits, avoids);
  CHECK(curriculum::compute_difficulty(ex, std::nullopt, &ten) == 0.5);
  CHECK(curriculum::compute_difficulty(ex, std::nullopt, nullptr) == 0.0);

  // monotone decreasing in the baseline
  gen::Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const double s1 = rng.uniform01();
    const double s2 = std::min(1.0, s1 + rng.uniform01() * (1 - s1));
    CHECK(curriculum::compute_difficulty(ex, s1, &r) >=
          curriculum::compute_difficulty(ex, s2, &r));
  }
}

TEST_CASE("build_schedule orders review then learning, easy to hard") {
  SUBCASE("all seen collapses to a single review phase") {
    const std::vector<curriculum::TrainingExample> examples = {
        make_example("a", true, 0.9), make_example("b", true, 0.1)};
    const auto schedule = curriculum::build_schedule(examples);
    REQUIRE(schedule.entries.size() == 2);
    CHECK(schedule.entries[0].example_id == "b");
    CHECK(schedule.entries[1].example_id == "a");
    for (const auto& e : schedule.entries) CHECK(e.phase == curriculum::Phase::Review);
  }

  SUBCASE("the worked four-example ordering") {
    const std::vector<curriculum::TrainingExample> examples = {
        make_example("s-hard", true, 0.9), make_example("s-easy", true, 0.1),
        make_example("u-hard", false, 0.8), make_example("u-easy", false, 0.2)};
    const auto schedule = curriculum::build_schedule(examples);
    REQUIRE(schedule.entries.size() == 4);
    CHECK(schedule.entries[0].example_id == "s-easy");
    CHECK(schedule.entries[1].example_id == "s-hard");
    CHECK(schedule.entries[2].example_id == "u-easy");
    CHECK(schedule.entries[3].example_id == "u-hard");
  }

  SUBCASE("equal difficulties fall back to id order") {
    const std::vector<curriculum::TrainingExample> examples = {
        make_example("zeta", true, 0.5), make_example("alpha", true, 0.5),
        make_example("mid", true, 0.5)};
    const auto schedule = curriculum::build_schedule(examples);
    CHECK(schedule.entries[0].example_id == "alpha");
    CHECK(schedule.entries[1].example_id == "mid");
    CHECK(schedule.entries[2].example_id == "zeta");
  }

  SUBCASE("out-of-range difficulty is rejected") {
    CHECK_THROWS_AS(curriculum::build_schedule({make_example("x", true, 1.5)}), Error);
  }
}

TEST_CASE("schedule invariants hold for random example sets") {
  gen::Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<curriculum::TrainingExample> examples;
    const int n = rng.range(0, 40);
    for (int i = 0; i < n; ++i) {
      examples.push_back(
          make_example("ex" + std::to_string(i), rng.chance(0.5), rng.uniform01()));
    }
    check_schedule_invariants(curriculum::build_schedule(examples), examples);
  }
}

TEST_CASE("interleaving keeps both streams ordered and covers everything once") {
  std::vector<curriculum::TrainingExample> examples;
  for (int i = 0; i < 6; ++i) examples.push_back(make_example("r" + std::to_string(i), true, i * 0.1));
  for (int i = 0; i < 6; ++i) {
    examples.push_back(make_example("l" + std::to_string(i), false, i * 0.1));
  }
  const auto schedule = curriculum::build_schedule(examples, 1.0);
  REQUIRE(schedule.entries.size() == 12);
  // ratio 1 alternates review and learning
  for (std::size_t i = 0; i < 12; ++i) {
    const auto expected = i % 2 == 0 ? curriculum::Phase::Review : curriculum::Phase::Learning;
    CHECK(schedule.entries[i].phase == expected);
  }
}

TEST_CASE("reward manifest pins the config and preserves schedule order") {
  const rubric::Rubric r = example_rubric();
  rubric::RubricSet rubrics;
  rubric::Rubric keyed = r;
  keyed.wafer_id = "w1";
  rubrics.add(keyed);

  std::map<std::string, curriculum::TrainingExample> examples;
  curriculum::Schedule schedule;
  for (int i = 0; i < 4; ++i) {
    curriculum::TrainingExample ex = make_example("e" + std::to_string(i), i < 2, 0.1 * i);
    ex.wafer_id = i == 3 ? "w-missing" : "w1";
    ex.question = "Where are the defects?";
    ex.image_ref = "img/" + ex.example_id + ".png";
    examples[ex.example_id] = ex;
    schedule.entries.push_back(
        {i < 2 ? curriculum::Phase::Review : curriculum::Phase::Learning, ex.example_id});
  }

  const scoring::EvalConfig config = scoring::EvalConfig::table1_optimized();
  const auto manifest = curriculum::export_reward_manifest(schedule, examples, rubrics, config, 7);

  REQUIRE(manifest.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(manifest.rows[i].at("example_id") == "e" + std::to_string(i));
  }
  CHECK(manifest.rows[3].contains("error"));  // missing rubric becomes an error entry
  CHECK_FALSE(manifest.rows[0].contains("error"));
  CHECK(manifest.header.at("eval_config_hash") == config.canonical_hash());
  CHECK(manifest.header.at("reward") == "rule_overall_score");

  // identical inputs produce an identical content hash
  const auto again = curriculum::export_reward_manifest(schedule, examples, rubrics, config, 7);
  CHECK(manifest.header.at("content_hash") == again.header.at("content_hash"));
}

TEST_CASE("the exported reward equals the scoring overall bit for bit") {
  const rubric::Rubric r = example_rubric();
  gen::Rng rng(41);
  for (int i = 0; i < 30; ++i) {
    const scoring::EvalConfig config = gen::random_config(rng);
    std::string response;
    for (int t = 0; t < rng.range(0, 20); ++t) {
      if (!response.empty()) response += ' ';
      response += rng.chance(0.5) ? rng.pick(r.spatial.must_hit) : gen::random_word(rng, 6);
    }
    // the manifest embeds the config; a consumer recomputing through the
    // embedded copy must get the same double
    const scoring::EvalConfig embedded = scoring::EvalConfig::from_json(config.to_json());
    CHECK(curriculum::reward(response, r, embedded) ==
          scoring::evaluate_response(response, r, config).overall);
  }
}

TEST_SUITE_END();
