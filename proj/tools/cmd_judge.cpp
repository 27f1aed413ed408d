// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "wafersage/errors.hpp"
#include "wafersage/judge.hpp"

namespace wafersage::cli {

int run_judge(const JudgeArgs& args) {
  RunConfig config = args.common.resolve();
  if (!args.responses.empty()) config.responses = args.responses;
  if (!args.rubrics.empty()) config.rubrics = args.rubrics;
  if (!args.cache_dir.empty()) config.cache_dir = args.cache_dir;
  if (config.responses.empty() || config.rubrics.empty()) {
    std::cerr << "judge: --responses and --rubrics are required\n";
    return kExitUsage;
  }
  transport::TransportProfile profile = config.judge_profile;
  if (!args.endpoint.empty()) profile.endpoint = args.endpoint;
  if (!args.model.empty()) profile.model = args.model;

  const rubric::RubricSet rubrics = rubric::load_rubrics(config.rubrics);
  std::vector<scoring::EvalItem> items;
  for (const auto& row : util::read_jsonl(config.responses)) {
    items.push_back(scoring::eval_item_from_json(row));
  }

  std::unique_ptr<transport::ChatTransport> base;
  if (!args.replay.empty()) {
    base = std::make_unique<transport::ReplayTransport>(args.replay);
  } else {
    base = std::make_unique<transport::HttpChatTransport>(profile);
  }
  std::unique_ptr<transport::RecordingTransport> recorder;
  transport::ChatTransport* active = base.get();
  if (!args.record.empty()) {
    recorder = std::make_unique<transport::RecordingTransport>(*base, args.record);
    active = recorder.get();
  }

  OutDirLock lock(config.out_dir);
  judge::JudgeOptions options;
  options.cache_dir = config.cache_dir;
  options.include_rubric = config.judge_include_rubric;
  const auto outcomes = judge::judge_items(
      items, [&](const std::string& id) { return rubrics.find(id); }, profile, *active, options);

  std::vector<util::ordered_json> rows;
  std::size_t failed = 0;
  std::size_t cached = 0;
  for (const auto& outcome : outcomes) {
    if (!outcome.error.empty()) ++failed;
    if (outcome.from_cache) ++cached;
    rows.push_back(judge::outcome_to_json(outcome));
  }
  util::write_file_atomic(std::filesystem::path(config.out_dir) / "verdicts.jsonl",
                          jsonl_with_header(make_header(config.eval, config.seed), rows));

  if (config.verbosity > 0) {
    std::cout << "judge: " << (outcomes.size() - failed) << " verdicts (" << cached
              << " cached), " << failed << " failed\n";
  }
  if (failed == outcomes.size() && !outcomes.empty()) return kExitFatal;
  if (failed > 0) return kExitPartial;
  return kExitOk;
}

}  // namespace wafersage::cli
