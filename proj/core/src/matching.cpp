// SPDX-License-Identifier: Apache-2.0
#include "wafersage/matching.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace wafersage::matching {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

}  // namespace

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    char emit = 0;
    if (is_word_byte(c)) {
      emit = (c < 0x80) ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    } else if (c == '-' && i > 0 && i + 1 < text.size() &&
               is_word_byte(static_cast<unsigned char>(text[i - 1])) &&
               is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
      emit = '-';
    }
    if (emit != 0) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(emit);
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  if (m == 0) return n;

  std::vector<std::size_t> row(m + 1);
  for (std::size_t j = 0; j <= m; ++j) row[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = diag + (a[j - 1] == b[i - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
    }
  }
  return row[m];
}

double similarity(std::string_view a, std::string_view b) {
  const std::size_t max_len = std::max(a.size(), b.size());
  if (max_len == 0) return 1.0;
  const std::size_t dist = edit_distance(a, b);
  return 1.0 - static_cast<double>(dist) / static_cast<double>(max_len);
}

std::vector<Token> tokenize(std::string_view normalized) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    const std::size_t space = normalized.find(' ', pos);
    const std::size_t end = (space == std::string_view::npos) ? normalized.size() : space;
    if (end > pos) tokens.push_back({pos, end});
    if (space == std::string_view::npos) break;
    pos = space + 1;
  }
  return tokens;
}

MatchEvidence keyword_hit(std::string_view response, std::string_view keyword, double threshold) {
  MatchEvidence ev;
  ev.keyword = std::string(keyword);
  if (keyword.empty() || response.empty()) return ev;

  const std::vector<Token> tokens = tokenize(response);
  const std::size_t n = tokens.size();
  if (n == 0) return ev;
  const std::size_t k = tokenize(keyword).size();

  std::vector<std::size_t> sizes;
  if (k <= 1) {
    if (1 <= n) sizes.push_back(1);
  } else {
    for (std::size_t w : {k - 1, k, k + 1}) {
      if (w >= 1 && w <= n) sizes.push_back(w);
    }
  }
  if (sizes.empty()) sizes.push_back(n);  // keyword longer than the whole response

  double best = -1.0;
  for (std::size_t w : sizes) {
    for (std::size_t start = 0; start + w <= n; ++start) {
      const std::size_t begin = tokens[start].begin;
      const std::size_t end = tokens[start + w - 1].end;
      const double sim = similarity(response.substr(begin, end - begin), keyword);
      if (sim > best) {
        best = sim;
        ev.span_begin = begin;
        ev.span_end = end;
      }
    }
  }
  ev.similarity = std::max(0.0, best);
  ev.matched = ev.similarity >= threshold;
  return ev;
}

CoverageResult count_coverage(std::string_view response, const std::vector<std::string>& must_hit,
                              double threshold) {
  CoverageResult result;
  if (must_hit.empty()) return result;
  std::size_t matched = 0;
  result.evidence.reserve(must_hit.size());
  for (const auto& kw : must_hit) {
    MatchEvidence ev = keyword_hit(response, kw, threshold);
    if (ev.matched) ++matched;
    result.evidence.push_back(std::move(ev));
  }
  result.coverage = static_cast<double>(matched) / static_cast<double>(must_hit.size());
  return result;
}

AvoidResult count_avoids(std::string_view response, const std::vector<std::string>& must_avoid,
                         double threshold) {
  AvoidResult result;
  std::unordered_set<std::string_view> seen;
  for (const auto& kw : must_avoid) {
    if (!seen.insert(kw).second) continue;  // distinct terms only
    MatchEvidence ev = keyword_hit(response, kw, threshold);
    if (ev.matched) ++result.false_terms;
    result.evidence.push_back(std::move(ev));
  }
  return result;
}

}  // namespace wafersage::matching
