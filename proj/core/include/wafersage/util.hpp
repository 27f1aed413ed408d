// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace wafersage::util {

using ordered_json = nlohmann::ordered_json;

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// Hex-encoded SHA-256 of the input bytes.
std::string sha256_hex(std::string_view data);

/// Stable 64-bit FNV-1a, used where a cheap cross-platform string hash
/// is enough (per-label RNG seeds). std::hash is not stable across
/// implementations, so it is unsuitable for anything reproducible.
std::uint64_t fnv1a64(std::string_view s);

/// Reads a whole file; throws IoError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes content to path atomically (temp file in the same directory, then rename).
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// True if the line is a CLI-style header record: {"header": {...}}.
bool is_header_line(const ordered_json& j);

/// Parses one JSON object per non-empty line. Header lines are skipped when
/// skip_header is set. Throws IoError on unreadable files and FormatError on
/// lines that fail to parse.
std::vector<ordered_json> read_jsonl(const std::filesystem::path& path, bool skip_header = true);

/// Serializes one object per line, no header.
std::string to_jsonl(const std::vector<ordered_json>& rows);

/// First balanced {...} substring that parses as a JSON object, if any.
/// Tolerates surrounding prose and code fences.
std::optional<ordered_json> extract_json_object(std::string_view text);

/// First balanced [...] substring that parses as a JSON array, if any.
std::optional<ordered_json> extract_json_array(std::string_view text);

/// Runs tasks(0..n-1) on up to max_workers threads. Each task writes only its
/// own slot, so results are deterministic regardless of scheduling. The first
/// captured exception is rethrown after all workers join.
void run_indexed(std::size_t n, int max_workers, const std::function<void(std::size_t)>& task);

}  // namespace wafersage::util
