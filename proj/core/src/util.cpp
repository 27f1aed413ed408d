// SPDX-License-Identifier: Apache-2.0
#include "wafersage/util.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <cctype>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "wafersage/errors.hpp"
#include "wafersage/types.hpp"

namespace wafersage {

std::optional<Dimension> dimension_from_string(std::string_view s) {
  if (s == "spatial") return Dimension::Spatial;
  if (s == "morphology") return Dimension::Morphology;
  if (s == "root_cause") return Dimension::RootCause;
  return std::nullopt;
}

std::optional<QuestionType> question_type_from_string(std::string_view s) {
  for (QuestionType q : kAllQuestionTypes) {
    if (s == to_string(q)) return q;
  }
  return std::nullopt;
}

std::optional<DifficultyTag> difficulty_tag_from_string(std::string_view s) {
  if (s == "easy") return DifficultyTag::Easy;
  if (s == "medium") return DifficultyTag::Medium;
  return std::nullopt;
}

}  // namespace wafersage

namespace wafersage::util {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

bool is_header_line(const ordered_json& j) {
  return j.is_object() && j.size() == 1 && j.contains("header");
}

std::vector<ordered_json> read_jsonl(const std::filesystem::path& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::vector<ordered_json> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (skip_header && lineno == 1 && is_header_line(j)) continue;
    rows.push_back(std::move(j));
  }
  return rows;
}

std::string to_jsonl(const std::vector<ordered_json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  return out;
}

namespace {

std::optional<ordered_json> extract_balanced(std::string_view text, char open, char close,
                                             bool want_object) {
  for (std::size_t start = text.find(open); start != std::string_view::npos;
       start = text.find(open, start + 1)) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (c == '\\') {
          ++i;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == open) {
        ++depth;
      } else if (c == close) {
        --depth;
        if (depth == 0) {
          auto j = ordered_json::parse(text.substr(start, i - start + 1), nullptr, false);
          if (!j.is_discarded() && (want_object ? j.is_object() : j.is_array())) return j;
          break;  // balanced but unparseable; try the next opener
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ordered_json> extract_json_object(std::string_view text) {
  return extract_balanced(text, '{', '}', true);
}

std::optional<ordered_json> extract_json_array(std::string_view text) {
  return extract_balanced(text, '[', ']', false);
}

void run_indexed(std::size_t n, int max_workers, const std::function<void(std::size_t)>& task) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, max_workers)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wafersage::util
