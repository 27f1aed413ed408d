// SPDX-License-Identifier: Apache-2.0
#include "wafersage/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "wafersage/errors.hpp"
#include "wafersage/matching.hpp"

namespace wafersage::alignment {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j share the same value; assign the mean 1-based rank
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DegenerateInputError("vectors must have equal length");
  const std::size_t n = x.size();
  if (n < 2) throw DegenerateInputError("need at least 2 observations");

  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x)) throw DegenerateInputError("x is constant; ranks carry no information");
  if (constant(y)) throw DegenerateInputError("y is constant; ranks carry no information");

  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;  // mean of average ranks

  double num = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rx[i] - mean;
    const double b = ry[i] - mean;
    num += a * b;
    dx += a * a;
    dy += b * b;
  }
  return num / std::sqrt(dx * dy);
}

AlignmentDataset AlignmentDataset::build(std::vector<AlignmentItem> items) {
  if (items.size() < 3) {
    throw DegenerateInputError("alignment needs at least 3 items");
  }
  for (const auto& item : items) {
    if (item.rubric == nullptr) {
      throw DegenerateInputError("alignment item \"" + item.id + "\" has no rubric");
    }
  }

  AlignmentDataset ds;
  ds.sims_.resize(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string response = matching::normalize(items[i].response);
    for (std::size_t d = 0; d < kAllDimensions.size(); ++d) {
      const rubric::RubricBucket& bucket = items[i].rubric->bucket(kAllDimensions[d]);
      BucketSims sims;
      sims.hit.reserve(bucket.must_hit.size());
      for (const auto& kw : bucket.must_hit) {
        sims.hit.push_back(
            matching::keyword_hit(response, matching::normalize(kw), 1.0).similarity);
      }
      // distinct avoid terms only, matching count_avoids
      std::vector<std::string> seen;
      for (const auto& kw : bucket.must_avoid) {
        std::string norm = matching::normalize(kw);
        if (std::find(seen.begin(), seen.end(), norm) != seen.end()) continue;
        sims.avoid.push_back(matching::keyword_hit(response, norm, 1.0).similarity);
        seen.push_back(std::move(norm));
      }
      ds.sims_[i][d] = std::move(sims);
    }
  }
  ds.items_ = std::move(items);

  // A constant judge vector can never produce a usable objective.
  const std::vector<double> overall = ds.judge_scores(ObjectiveMode::Overall);
  if (std::all_of(overall.begin(), overall.end(),
                  [&](double v) { return v == overall.front(); })) {
    throw DegenerateInputError("judge overall scores are constant");
  }
  return ds;
}

std::vector<double> AlignmentDataset::rule_scores(const scoring::EvalConfig& config,
                                                  ObjectiveMode mode) const {
  std::vector<double> out;
  out.reserve(items_.size());
  const auto weights = config.effective_dimension_weights();

  for (std::size_t i = 0; i < items_.size(); ++i) {
    std::array<double, 3> dim_scores{};
    for (std::size_t d = 0; d < 3; ++d) {
      const BucketSims& sims = sims_[i][d];
      double coverage = 0.0;
      if (!sims.hit.empty()) {
        const auto matched = std::count_if(sims.hit.begin(), sims.hit.end(), [&](double s) {
          return s >= config.fuzzy_threshold;
        });
        coverage = static_cast<double>(matched) / static_cast<double>(sims.hit.size());
      }
      const auto false_terms =
          static_cast<int>(std::count_if(sims.avoid.begin(), sims.avoid.end(), [&](double s) {
            return s >= config.fuzzy_threshold;
          }));
      const double hit = scoring::hit_score(coverage, config.hit_slope);
      const double avoid =
          scoring::avoid_score(false_terms, config.penalty_type, config.penalty_rate);
      dim_scores[d] = scoring::dimension_score(hit, avoid, config);
    }
    switch (mode) {
      case ObjectiveMode::Overall:
        out.push_back(weights[0] * dim_scores[0] + weights[1] * dim_scores[1] +
                      weights[2] * dim_scores[2]);
        break;
      case ObjectiveMode::Spatial:
        out.push_back(dim_scores[0]);
        break;
      case ObjectiveMode::Morphology:
        out.push_back(dim_scores[1]);
        break;
      case ObjectiveMode::RootCause:
        out.push_back(dim_scores[2]);
        break;
    }
  }
  return out;
}

std::vector<double> AlignmentDataset::judge_scores(ObjectiveMode mode) const {
  std::vector<double> out;
  out.reserve(items_.size());
  for (const auto& item : items_) {
    switch (mode) {
      case ObjectiveMode::Overall:
        out.push_back(item.verdict.overall);
        break;
      case ObjectiveMode::Spatial:
        out.push_back(item.verdict.spatial);
        break;
      case ObjectiveMode::Morphology:
        out.push_back(item.verdict.morphology);
        break;
      case ObjectiveMode::RootCause:
        out.push_back(item.verdict.root_cause);
        break;
    }
  }
  return out;
}

double alignment_objective(const scoring::EvalConfig& config, const AlignmentDataset& dataset,
                           ObjectiveMode mode) {
  const std::vector<double> rule = dataset.rule_scores(config, mode);
  const std::vector<double> judge = dataset.judge_scores(mode);
  return spearman(rule, judge);
}

namespace {

/// Deterministic, implementation-independent draws on top of mt19937_64.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;  // [0, 1)
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct Observation {
  std::array<double, 6> params;  // hit_weight, threshold, rate, scale_s, scale_m, scale_r
  scoring::PenaltyType penalty_type;
  double objective;
};

std::array<std::pair<double, double>, 6> bounds_of(const SearchSpace& space) {
  return {{{space.hit_weight_min, space.hit_weight_max},
           {space.fuzzy_threshold_min, space.fuzzy_threshold_max},
           {space.penalty_rate_min, space.penalty_rate_max},
           {space.dimension_scale_min, space.dimension_scale_max},
           {space.dimension_scale_min, space.dimension_scale_max},
           {space.dimension_scale_min, space.dimension_scale_max}}};
}

scoring::EvalConfig config_from_params(const std::array<double, 6>& p,
                                       scoring::PenaltyType penalty_type) {
  scoring::EvalConfig c;  // defaults keep hit_slope and the base dimension weights
  c.hit_weight = p[0];
  c.avoid_weight = 1.0 - p[0];
  c.fuzzy_threshold = p[1];
  c.penalty_type = penalty_type;
  c.penalty_rate = p[2];
  c.scale_spatial = p[3];
  c.scale_morphology = p[4];
  c.scale_root_cause = p[5];
  return c;
}

double gaussian_mixture_density(double x, const std::vector<double>& centers, double bandwidth) {
  if (centers.empty()) return 0.0;
  double total = 0.0;
  for (double c : centers) {
    const double z = (x - c) / bandwidth;
    total += std::exp(-0.5 * z * z);
  }
  return total / (static_cast<double>(centers.size()) * bandwidth * std::sqrt(2.0 * M_PI));
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

OptimizeResult optimize(const SearchSpace& space, const AlignmentDataset& dataset, int budget,
                        std::uint64_t seed, ObjectiveMode mode) {
  if (budget < 10) throw Error("optimization budget must be at least 10");
  if (space.penalty_types.empty()) throw Error("search space needs at least one penalty type");

  RandomSource rng(seed);
  const auto bounds = bounds_of(space);

  const auto evaluate = [&](const std::array<double, 6>& p, scoring::PenaltyType pt) {
    const scoring::EvalConfig config = config_from_params(p, pt);
    try {
      return alignment_objective(config, dataset, mode);
    } catch (const DegenerateInputError&) {
      return -1.0;  // no ranking signal under this config
    }
  };

  std::vector<Observation> observations;
  observations.reserve(static_cast<std::size_t>(budget));

  OptimizeResult result;
  result.trace.seed = seed;
  result.trace.budget = budget;
  double best = -2.0;
  std::size_t best_index = 0;

  const auto record = [&](const std::array<double, 6>& p, scoring::PenaltyType pt,
                          double objective) {
    observations.push_back({p, pt, objective});
    if (objective > best) {
      best = objective;
      best_index = observations.size() - 1;
    }
    result.trace.entries.push_back({config_from_params(p, pt), objective, best});
  };

  const int n_init = std::max(2, budget / 4);
  for (int i = 0; i < n_init; ++i) {
    std::array<double, 6> p{};
    for (std::size_t d = 0; d < 6; ++d) p[d] = rng.uniform(bounds[d].first, bounds[d].second);
    const scoring::PenaltyType pt = space.penalty_types[rng.index(space.penalty_types.size())];
    record(p, pt, evaluate(p, pt));
  }

  constexpr int kCandidates = 24;
  constexpr double kExplore = 0.1;  // per-dimension uniform resample probability
  constexpr double kGamma = 0.25;   // fraction of observations treated as "good"

  while (static_cast<int>(observations.size()) < budget) {
    // Partition by objective, best first.
    std::vector<std::size_t> order(observations.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return observations[a].objective > observations[b].objective;
    });
    const std::size_t n_good = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(kGamma * static_cast<double>(order.size()))));

    std::array<std::vector<double>, 6> good_vals;
    std::array<std::vector<double>, 6> bad_vals;
    std::array<std::size_t, 2> good_cat{0, 0};
    std::array<std::size_t, 2> bad_cat{0, 0};
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      const Observation& obs = observations[order[rank]];
      const bool is_good = rank < n_good;
      for (std::size_t d = 0; d < 6; ++d) {
        (is_good ? good_vals[d] : bad_vals[d]).push_back(obs.params[d]);
      }
      const std::size_t cat = obs.penalty_type == scoring::PenaltyType::Linear ? 0 : 1;
      ++(is_good ? good_cat[cat] : bad_cat[cat]);
    }

    std::array<double, 6> good_bw{};
    std::array<double, 6> bad_bw{};
    for (std::size_t d = 0; d < 6; ++d) {
      const double range = bounds[d].second - bounds[d].first;
      const auto bw = [&](const std::vector<double>& vals) {
        const double sd = stddev(vals);
        const double n = std::max<std::size_t>(vals.size(), 2);
        return std::max({1.06 * sd * std::pow(static_cast<double>(n), -0.2),
                         range / (2.0 * static_cast<double>(n)), range * 0.02});
      };
      good_bw[d] = bw(good_vals[d]);
      bad_bw[d] = bw(bad_vals[d]);
    }

    const double good_lin =
        (static_cast<double>(good_cat[0]) + 0.5) / (static_cast<double>(n_good) + 1.0);
    const std::size_t n_bad = order.size() - n_good;
    const double bad_lin =
        (static_cast<double>(bad_cat[0]) + 0.5) / (static_cast<double>(n_bad) + 1.0);

    double best_acq = -std::numeric_limits<double>::infinity();
    std::array<double, 6> best_params{};
    scoring::PenaltyType best_pt = scoring::PenaltyType::Linear;

    for (int cand = 0; cand < kCandidates; ++cand) {
      std::array<double, 6> p{};
      for (std::size_t d = 0; d < 6; ++d) {
        if (good_vals[d].empty() || rng.uniform01() < kExplore) {
          p[d] = rng.uniform(bounds[d].first, bounds[d].second);
        } else {
          const double center = good_vals[d][rng.index(good_vals[d].size())];
          p[d] = std::clamp(center + rng.normal() * good_bw[d], bounds[d].first,
                            bounds[d].second);
        }
      }
      scoring::PenaltyType pt;
      if (space.penalty_types.size() == 1) {
        pt = space.penalty_types.front();
      } else {
        pt = rng.uniform01() < good_lin ? scoring::PenaltyType::Linear
                                        : scoring::PenaltyType::Quadratic;
      }

      double acq = 0.0;
      const double floor = 1e-12;
      for (std::size_t d = 0; d < 6; ++d) {
        const double range = bounds[d].second - bounds[d].first;
        const double uniform_pdf = 1.0 / range;
        const double l =
            0.8 * gaussian_mixture_density(p[d], good_vals[d], good_bw[d]) + 0.2 * uniform_pdf;
        const double g =
            0.8 * gaussian_mixture_density(p[d], bad_vals[d], bad_bw[d]) + 0.2 * uniform_pdf;
        acq += std::log(std::max(l, floor)) - std::log(std::max(g, floor));
      }
      if (space.penalty_types.size() > 1) {
        const double pl = pt == scoring::PenaltyType::Linear ? good_lin : 1.0 - good_lin;
        const double pg = pt == scoring::PenaltyType::Linear ? bad_lin : 1.0 - bad_lin;
        acq += std::log(std::max(pl, floor)) - std::log(std::max(pg, floor));
      }

      if (acq > best_acq) {
        best_acq = acq;
        best_params = p;
        best_pt = pt;
      }
    }

    record(best_params, best_pt, evaluate(best_params, best_pt));
  }

  result.best = config_from_params(observations[best_index].params,
                                   observations[best_index].penalty_type);
  result.best_objective = observations[best_index].objective;
  return result;
}

util::ordered_json trace_entry_to_json(const TraceEntry& entry, int index) {
  return {{"index", index},
          {"objective", entry.objective},
          {"best_so_far", entry.best_so_far},
          {"config", entry.config.to_json()}};
}

}  // namespace wafersage::alignment
