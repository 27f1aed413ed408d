// SPDX-License-Identifier: Apache-2.0
#include "common.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstdlib>
#include <ctime>

#include "wafersage/errors.hpp"
#include "wafersage/version.hpp"

namespace wafersage::cli {

RunConfig RunConfig::load(const std::filesystem::path& path) {
  RunConfig config;
  const auto j = util::ordered_json::parse(util::read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error("config file is not a JSON object: " + path.string());
  }
  if (j.contains("paths")) {
    const auto& p = j.at("paths");
    if (p.contains("rubrics")) config.rubrics = p.at("rubrics").get<std::string>();
    if (p.contains("responses")) config.responses = p.at("responses").get<std::string>();
    if (p.contains("embeddings")) config.embeddings = p.at("embeddings").get<std::string>();
    if (p.contains("out_dir")) config.out_dir = p.at("out_dir").get<std::string>();
    if (p.contains("cache_dir")) config.cache_dir = p.at("cache_dir").get<std::string>();
  }
  if (j.contains("eval")) config.eval = scoring::EvalConfig::from_json(j.at("eval"));
  if (j.contains("transports")) {
    const auto& t = j.at("transports");
    if (t.contains("judge")) {
      config.judge_profile = transport::TransportProfile::from_json(t.at("judge"));
    }
    if (t.contains("synthesis")) {
      config.synthesis_profile = transport::TransportProfile::from_json(t.at("synthesis"));
    }
  }
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("verbosity")) config.verbosity = j.at("verbosity").get<int>();
  if (j.contains("judge_include_rubric")) {
    config.judge_include_rubric = j.at("judge_include_rubric").get<bool>();
  }
  return config;
}

namespace {

std::string timestamp_utc() {
  if (const char* pinned = std::getenv("WAFERSAGE_TIMESTAMP"); pinned != nullptr && *pinned) {
    return pinned;
  }
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

util::ordered_json make_header(const scoring::EvalConfig& eval, std::uint64_t seed) {
  return {{"header",
           {{"tool", "wafersage"},
            {"version", kVersion},
            {"config_hash", eval.canonical_hash()},
            {"seed", seed},
            {"timestamp", timestamp_utc()}}}};
}

std::string jsonl_with_header(const util::ordered_json& header,
                              const std::vector<util::ordered_json>& rows) {
  std::string out = header.dump();
  out += '\n';
  out += util::to_jsonl(rows);
  return out;
}

OutDirLock::OutDirLock(const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  lock_path_ = out_dir / ".wafersage.lock";
  const int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    throw Error("output directory is locked by another run (" + lock_path_.string() +
                " exists); remove the lock file if that run is gone");
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] const auto written = ::write(fd, pid.data(), pid.size());
  ::close(fd);
  held_ = true;
}

OutDirLock::~OutDirLock() {
  if (held_) {
    std::error_code ec;
    std::filesystem::remove(lock_path_, ec);
  }
}

scoring::EvalConfig resolve_eval_config(const RunConfig& config, const std::string& preset,
                                        const std::string& eval_config_path) {
  if (!preset.empty() && !eval_config_path.empty()) {
    throw Error("--preset and --eval-config are mutually exclusive");
  }
  if (!preset.empty()) {
    const auto c = scoring::EvalConfig::preset(preset);
    if (!c) throw Error("unknown preset \"" + preset + "\"");
    return *c;
  }
  if (!eval_config_path.empty()) {
    const auto j = util::ordered_json::parse(util::read_file(eval_config_path));
    return scoring::EvalConfig::from_json(j);
  }
  return config.eval;
}

}  // namespace wafersage::cli
