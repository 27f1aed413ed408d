// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "common.hpp"

namespace wafersage::cli {

/// Options shared by every subcommand (--config/--out/--seed).
struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;

  /// Loads the config file (when given) and applies overrides.
  RunConfig resolve() const;
};

struct EvaluateArgs {
  CommonArgs common;
  std::string responses;
  std::string rubrics;
  std::string preset;
  std::string eval_config;
  bool evidence = false;
};
int run_evaluate(const EvaluateArgs& args);

struct JudgeArgs {
  CommonArgs common;
  std::string responses;
  std::string rubrics;
  std::string cache_dir;
  std::string endpoint;
  std::string model;
  std::string replay;  // transcript file: judge offline from recorded replies
  std::string record;  // write a transcript while judging
};
int run_judge(const JudgeArgs& args);

struct AlignArgs {
  CommonArgs common;
  std::string responses;
  std::string rubrics;
  std::string verdicts;
  int budget = 200;
  std::string mode = "overall";
  std::string preset;
  std::string eval_config;
};
int run_align(const AlignArgs& args);

struct CurateArgs {
  CommonArgs common;
  std::string embeddings;
  int k = 0;  // 0: silhouette-based choice per label
  int n_near = 5;
  int n_far = 5;
  double percentile = 95.0;
  bool per_label = true;
  std::string pca_out;  // optional 2D projection file name (inside --out)
};
int run_curate(const CurateArgs& args);

struct SynthArgs {
  CommonArgs common;
  std::string manifest;
  std::string endpoint;
  std::string model;
  std::string stage0_model;
  std::string stage1_model;
  std::string stage2_model;
  std::string record;
  std::string replay;
  int max_in_flight = 0;  // 0: use profile value
};
int run_synth(const SynthArgs& args);

struct ScheduleArgs {
  CommonArgs common;
  std::string examples;
  std::string rubrics;
  std::string baseline;  // evaluate output JSONL supplying baseline scores
  double interleave_ratio = 0.0;
  std::string preset;
  std::string eval_config;
};
int run_schedule(const ScheduleArgs& args);

struct ReportArgs {
  CommonArgs common;
  std::string eval_report;
  std::string judge_report;
};
int run_report(const ReportArgs& args);

}  // namespace wafersage::cli
