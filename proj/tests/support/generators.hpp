// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wafersage/matching.hpp"
#include "wafersage/rubric.hpp"
#include "wafersage/scoring.hpp"

namespace gen {

/// Thin deterministic wrapper; all draws derive from mt19937_64 directly so
/// fixtures reproduce across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(double p) { return uniform01() < p; }
  std::uint64_t raw() { return engine_(); }

  double normal(double mu, double sigma) {
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    return mu + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[engine_() % v.size()];
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[engine_() % i]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

inline std::string random_word(Rng& rng, int len) {
  std::string word;
  for (int i = 0; i < len; ++i) {
    word.push_back(static_cast<char>('a' + rng.range(0, 25)));
  }
  return word;
}

/// A word whose similarity to every word already in `taken` stays below 0.45.
inline std::string fresh_word(Rng& rng, std::vector<std::string>& taken, int len = 12);

/// A degraded copy: the last `edits` characters replaced by digits, giving
/// edit distance exactly `edits` against the original.
inline std::string degrade(const std::string& word, int edits) {
  std::string out = word;
  for (int i = 0; i < edits && i < static_cast<int>(out.size()); ++i) {
    out[out.size() - 1 - i] = static_cast<char>('0' + (i % 10));
  }
  return out;
}

/// A random but valid EvalConfig.
inline wafersage::scoring::EvalConfig random_config(Rng& rng) {
  wafersage::scoring::EvalConfig c;
  c.hit_weight = rng.uniform(0.0, 1.0);
  c.avoid_weight = 1.0 - c.hit_weight;
  c.fuzzy_threshold = rng.uniform(0.5, 0.95);
  c.penalty_type = rng.chance(0.5) ? wafersage::scoring::PenaltyType::Linear
                                   : wafersage::scoring::PenaltyType::Quadratic;
  c.penalty_rate = rng.uniform(0.05, 0.5);
  c.hit_slope = rng.uniform(1.0, 2.0);
  c.scale_spatial = rng.uniform(0.5, 2.0);
  c.scale_morphology = rng.uniform(0.5, 2.0);
  c.scale_root_cause = rng.uniform(0.5, 2.0);
  return c;
}

/// Builds a rubric directly from keyword lists (raw_fields carry the joined
/// strings so serialization stays schema-shaped).
inline wafersage::rubric::Rubric make_rubric(const std::string& wafer_id,
                                             const std::array<std::vector<std::string>, 3>& hits,
                                             const std::array<std::vector<std::string>, 3>& avoids) {
  using wafersage::Dimension;
  wafersage::rubric::Rubric r;
  r.wafer_id = wafer_id;
  r.defect_types = {"Donut"};
  const auto join = [](const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
      if (!out.empty()) out += ", ";
      out += w;
    }
    return out;
  };
  const std::array<Dimension, 3> dims = {Dimension::Spatial, Dimension::Morphology,
                                         Dimension::RootCause};
  const std::array<const char*, 3> hit_field = {"zone", "pattern_type", "process_step"};
  const std::array<const char*, 3> avoid_field = {"spatial_avoid", "morphology_avoid",
                                                  "root_cause_avoid"};
  for (std::size_t d = 0; d < 3; ++d) {
    auto& bucket = r.bucket(dims[d]);
    bucket.dimension = dims[d];
    bucket.must_hit = hits[d];
    bucket.must_avoid = avoids[d];
    bucket.raw_fields[hit_field[d]] = join(hits[d]);
    bucket.raw_fields[avoid_field[d]] = avoids[d];
  }
  return r;
}

inline std::string fresh_word(Rng& rng, std::vector<std::string>& taken, int len) {
  while (true) {
    std::string candidate = random_word(rng, len);
    bool ok = true;
    for (const auto& existing : taken) {
      if (wafersage::matching::similarity(candidate, existing) > 0.45) {
        ok = false;
        break;
      }
    }
    if (ok) {
      taken.push_back(candidate);
      return candidate;
    }
  }
}

}  // namespace gen
