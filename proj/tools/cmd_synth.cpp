// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "wafersage/errors.hpp"
#include "wafersage/synthesis.hpp"

namespace wafersage::cli {

int run_synth(const SynthArgs& args) {
  RunConfig config = args.common.resolve();
  if (args.manifest.empty()) {
    std::cerr << "synth: --manifest is required\n";
    return kExitUsage;
  }
  transport::TransportProfile profile = config.synthesis_profile;
  if (!args.endpoint.empty()) profile.endpoint = args.endpoint;
  if (!args.model.empty()) profile.model = args.model;

  const auto manifest = synthesis::load_manifest(args.manifest);

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

  synthesis::PipelineTransports transports = synthesis::PipelineTransports::single(*active);
  transports.stage0_model = args.stage0_model.empty() ? profile.model : args.stage0_model;
  transports.stage1_model = args.stage1_model.empty() ? profile.model : args.stage1_model;
  transports.stage2_model = args.stage2_model.empty() ? profile.model : args.stage2_model;

  synthesis::PipelineOptions options;
  options.max_in_flight = args.max_in_flight > 0 ? args.max_in_flight : profile.max_in_flight;

  OutDirLock lock(config.out_dir);
  const synthesis::RunReport report =
      synthesis::run_pipeline(manifest, transports, config.out_dir, options);

  if (config.verbosity > 0) {
    std::cout << "synth: " << report.succeeded << "/" << report.total << " wafers ("
              << report.skipped << " resumed), " << report.repairs << " repairs, "
              << report.dropped_pairs << " pairs dropped, " << report.errors.size()
              << " errors\n";
    for (const auto& [wafer, message] : report.errors) {
      std::cerr << "synth: " << wafer << ": " << message << "\n";
    }
  }
  // partial failures leave usable outputs behind and resume on the next run
  return report.all_failed() ? kExitFatal : kExitOk;
}

}  // namespace wafersage::cli
