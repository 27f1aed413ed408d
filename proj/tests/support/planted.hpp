// SPDX-License-Identifier: Apache-2.0
// Synthetic alignment fixture with a known optimum: the judge is a noisy
// monotone function of the rule score computed at hit_weight 0.9,
// fuzzy_threshold 0.713, linear penalty. Responses carry keyword variants at
// similarity 2/3 and 3/4, so thresholds in (2/3, 3/4] reproduce the planted
// match pattern and anything outside flips matches and hurts the objective.
#pragma once

#include <array>
#include <deque>
#include <string>
#include <vector>

#include "generators.hpp"
#include "wafersage/alignment.hpp"
#include "wafersage/scoring.hpp"

namespace planted {

struct Fixture {
  std::deque<wafersage::rubric::Rubric> rubrics;  // stable addresses
  std::vector<wafersage::alignment::AlignmentItem> items;
  wafersage::scoring::EvalConfig plant;
};

inline Fixture make_fixture(std::uint64_t seed, int n_items) {
  using wafersage::scoring::EvalConfig;
  gen::Rng rng(seed);

  Fixture fx;
  fx.plant = EvalConfig::table1_optimized();  // hit 0.9 / threshold 0.713 / linear

  std::vector<std::string> lexicon;  // keeps all words pairwise dissimilar

  for (int i = 0; i < n_items; ++i) {
    std::array<std::vector<std::string>, 3> hits;
    std::array<std::vector<std::string>, 3> avoids;
    std::vector<std::string> response_tokens;

    for (int d = 0; d < 3; ++d) {
      const int n_hit = rng.range(6, 9);
      const int n_avoid = rng.range(2, 3);
      for (int k = 0; k < n_hit; ++k) {
        const std::string kw = gen::fresh_word(rng, lexicon);
        hits[d].push_back(kw);
        const double roll = rng.uniform01();
        if (roll < 0.35) {
          response_tokens.push_back(kw);  // exact hit at any threshold
        } else if (roll < 0.55) {
          response_tokens.push_back(gen::degrade(kw, 3));  // sim 0.75: hit at the plant
        } else if (roll < 0.75) {
          response_tokens.push_back(gen::degrade(kw, 4));  // sim 2/3: miss at the plant
        }
        // else: keyword absent entirely
      }
      for (int k = 0; k < n_avoid; ++k) {
        const std::string kw = gen::fresh_word(rng, lexicon);
        avoids[d].push_back(kw);
        const double roll = rng.uniform01();
        if (roll < 0.15) {
          response_tokens.push_back(kw);
        } else if (roll < 0.28) {
          response_tokens.push_back(gen::degrade(kw, 2));  // sim 5/6: hit at the plant
        } else if (roll < 0.40) {
          response_tokens.push_back(gen::degrade(kw, 4));  // below-plant distractor
        }
      }
    }
    rng.shuffle(response_tokens);
    std::string response;
    for (const auto& t : response_tokens) {
      if (!response.empty()) response += ' ';
      response += t;
    }

    fx.rubrics.push_back(gen::make_rubric("pw" + std::to_string(i), hits, avoids));

    wafersage::alignment::AlignmentItem item;
    item.id = "item" + std::to_string(i);
    item.response = response;
    item.rubric = &fx.rubrics.back();
    fx.items.push_back(std::move(item));
  }

  // judge = affine map of the planted rule score plus small noise
  for (auto& item : fx.items) {
    const auto report =
        wafersage::scoring::evaluate_response(item.response, *item.rubric, fx.plant);
    const auto noisy = [&](double value) {
      return std::clamp(1.0 + 9.0 * (0.1 + 0.8 * value) + rng.normal(0.0, 0.02), 1.0, 10.0);
    };
    item.verdict.overall = noisy(report.overall);
    item.verdict.spatial = noisy(report.dimensions[0].score);
    item.verdict.morphology = noisy(report.dimensions[1].score);
    item.verdict.root_cause = noisy(report.dimensions[2].score);
    item.verdict.model_id = "planted-judge";
  }
  return fx;
}

}  // namespace planted
