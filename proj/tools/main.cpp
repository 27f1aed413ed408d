// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "wafersage/errors.hpp"
#include "wafersage/version.hpp"

namespace {

void add_common(CLI::App* cmd, wafersage::cli::CommonArgs& common) {
  cmd->add_option("--config", common.config_path, "run config file (JSON)");
  cmd->add_option("--out", common.out_dir, "output directory");
  cmd->add_option("--seed", common.seed, "seed for every random choice")
      ->each([&common](const std::string&) { common.seed_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wafer-defect VQA evaluation and data-pipeline toolkit"};
  app.set_version_flag("--version", wafersage::kVersion);
  app.require_subcommand(1);

  wafersage::cli::EvaluateArgs evaluate_args;
  auto* evaluate = app.add_subcommand("evaluate", "score responses against rubrics");
  add_common(evaluate, evaluate_args.common);
  evaluate->add_option("--responses", evaluate_args.responses, "items JSONL");
  evaluate->add_option("--rubrics", evaluate_args.rubrics, "rubric file (JSON or JSONL)");
  evaluate->add_option("--preset", evaluate_args.preset,
                       "eval config preset (default, table1-optimized)");
  evaluate->add_option("--eval-config", evaluate_args.eval_config, "eval config file");
  evaluate->add_flag("--evidence", evaluate_args.evidence, "include per-keyword evidence");

  wafersage::cli::JudgeArgs judge_args;
  auto* judge = app.add_subcommand("judge", "collect LLM-judge verdicts");
  add_common(judge, judge_args.common);
  judge->add_option("--responses", judge_args.responses, "items JSONL");
  judge->add_option("--rubrics", judge_args.rubrics, "rubric file");
  judge->add_option("--cache", judge_args.cache_dir, "verdict cache directory");
  judge->add_option("--endpoint", judge_args.endpoint, "chat-completions endpoint URL");
  judge->add_option("--model", judge_args.model, "judge model name");
  judge->add_option("--record", judge_args.record, "record a transcript to this file");
  judge->add_option("--replay", judge_args.replay, "replay replies from this transcript");

  wafersage::cli::AlignArgs align_args;
  auto* align = app.add_subcommand("align", "tune the scorer against judge verdicts");
  add_common(align, align_args.common);
  align->add_option("--responses", align_args.responses, "items JSONL");
  align->add_option("--rubrics", align_args.rubrics, "rubric file");
  align->add_option("--judge", align_args.verdicts, "judge verdicts JSONL");
  align->add_option("--budget", align_args.budget, "objective evaluations (>= 10)");
  align->add_option("--mode", align_args.mode, "overall|spatial|morphology|root_cause");
  align->add_option("--preset", align_args.preset, "eval config preset");
  align->add_option("--eval-config", align_args.eval_config, "eval config file");

  wafersage::cli::CurateArgs curate_args;
  auto* curate = app.add_subcommand("curate", "cluster embeddings and sample training data");
  add_common(curate, curate_args.common);
  curate->add_option("--embeddings", curate_args.embeddings, "embeddings file (JSONL or WSEM)");
  curate->add_option("--k", curate_args.k, "clusters per label (0 = silhouette choice)");
  curate->add_option("--n-near", curate_args.n_near, "near-centroid samples per cluster");
  curate->add_option("--n-far", curate_args.n_far, "far-from-centroid samples per cluster");
  curate->add_option("--percentile", curate_args.percentile, "outlier distance percentile");
  curate->add_flag("!--no-per-label", curate_args.per_label,
                   "cluster all labels together instead of per label");
  curate->add_option("--pca-out", curate_args.pca_out, "write a 2D PCA projection (file name)");

  wafersage::cli::SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "run the three-stage VQA synthesis pipeline");
  add_common(synth, synth_args.common);
  synth->add_option("--manifest", synth_args.manifest, "wafer manifest JSONL");
  synth->add_option("--endpoint", synth_args.endpoint, "chat-completions endpoint URL");
  synth->add_option("--model", synth_args.model, "model for all stages");
  synth->add_option("--stage0-model", synth_args.stage0_model, "descriptor model");
  synth->add_option("--stage1-model", synth_args.stage1_model, "rubric model");
  synth->add_option("--stage2-model", synth_args.stage2_model, "VQA model");
  synth->add_option("--record", synth_args.record, "record a transcript to this file");
  synth->add_option("--replay", synth_args.replay, "replay replies from this transcript");
  synth->add_option("--max-in-flight", synth_args.max_in_flight, "concurrent wafers");

  wafersage::cli::ScheduleArgs schedule_args;
  auto* schedule = app.add_subcommand("schedule", "build the curriculum and reward manifest");
  add_common(schedule, schedule_args.common);
  schedule->add_option("--examples", schedule_args.examples, "training examples JSONL");
  schedule->add_option("--rubrics", schedule_args.rubrics, "rubric file");
  schedule->add_option("--baseline", schedule_args.baseline,
                       "evaluate output JSONL supplying baseline scores");
  schedule->add_option("--interleave-ratio", schedule_args.interleave_ratio,
                       "learning items interleaved per review item (0 = sequential)");
  schedule->add_option("--preset", schedule_args.preset, "eval config preset");
  schedule->add_option("--eval-config", schedule_args.eval_config, "eval config file");

  wafersage::cli::ReportArgs report_args;
  auto* report = app.add_subcommand("report", "tabulate rule and judge results side by side");
  add_common(report, report_args.common);
  report->add_option("--eval", report_args.eval_report, "evaluate output JSONL");
  report->add_option("--judge", report_args.judge_report, "judge verdicts JSONL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return wafersage::cli::kExitUsage;
  }

  try {
    if (*evaluate) return wafersage::cli::run_evaluate(evaluate_args);
    if (*judge) return wafersage::cli::run_judge(judge_args);
    if (*align) return wafersage::cli::run_align(align_args);
    if (*curate) return wafersage::cli::run_curate(curate_args);
    if (*synth) return wafersage::cli::run_synth(synth_args);
    if (*schedule) return wafersage::cli::run_schedule(schedule_args);
    if (*report) return wafersage::cli::run_report(report_args);
  } catch (const wafersage::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return wafersage::cli::kExitFatal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return wafersage::cli::kExitFatal;
  }
  return wafersage::cli::kExitUsage;
}
