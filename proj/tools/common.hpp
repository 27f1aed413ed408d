// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "wafersage/scoring.hpp"
#include "wafersage/transport.hpp"
#include "wafersage/util.hpp"

namespace wafersage::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;
inline constexpr int kExitUsage = 64;

/// Everything a run can configure from one JSON file; flags override fields.
struct RunConfig {
  std::string rubrics;
  std::string responses;
  std::string embeddings;
  std::string out_dir = "out";
  std::string cache_dir = "cache";
  scoring::EvalConfig eval;
  transport::TransportProfile judge_profile;
  transport::TransportProfile synthesis_profile;
  std::uint64_t seed = 42;
  int verbosity = 1;
  bool judge_include_rubric = true;

  static RunConfig load(const std::filesystem::path& path);
};

/// First line of every output file: {"header": {tool, version, config_hash,
/// seed, timestamp}}. The timestamp honors WAFERSAGE_TIMESTAMP when set, so
/// runs can be made byte-reproducible end to end; without it, outputs are
/// reproducible after stripping the header.
util::ordered_json make_header(const scoring::EvalConfig& eval, std::uint64_t seed);

std::string jsonl_with_header(const util::ordered_json& header,
                              const std::vector<util::ordered_json>& rows);

/// Holds .wafersage.lock inside a directory for the process lifetime;
/// creation fails when another writer holds it.
class OutDirLock {
 public:
  explicit OutDirLock(const std::filesystem::path& out_dir);
  ~OutDirLock();
  OutDirLock(const OutDirLock&) = delete;
  OutDirLock& operator=(const OutDirLock&) = delete;

 private:
  std::filesystem::path lock_path_;
  bool held_ = false;
};

/// Resolves --preset / --eval-config flags against the config-file default.
scoring::EvalConfig resolve_eval_config(const RunConfig& config, const std::string& preset,
                                        const std::string& eval_config_path);

}  // namespace wafersage::cli
