// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace wafersage::matching {

/// Outcome of matching one keyword against a response.
struct MatchEvidence {
  std::string keyword;
  bool matched = false;
  std::size_t span_begin = 0;  // character range in the normalized response
  std::size_t span_end = 0;
  double similarity = 0.0;
};

/// Lowercases, replaces punctuation except intra-word hyphens by spaces and
/// collapses whitespace. Bytes >= 0x80 pass through unchanged.
std::string normalize(std::string_view text);

/// Levenshtein distance over bytes.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// 1 - edit_distance / max(len). 1.0 when both strings are empty; symmetric;
/// equals 1 iff the strings are equal.
double similarity(std::string_view a, std::string_view b);

struct Token {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Token spans of a normalized string (single-space separated).
std::vector<Token> tokenize(std::string_view normalized);

/// Best fuzzy occurrence of a keyword in a response. Both inputs must already
/// be normalized. Slides windows of k tokens over the response, where k is the
/// keyword's token count; for k > 1 windows of k-1 and k+1 tokens are also
/// tried to tolerate token merges and splits. When the response is shorter
/// than every window size, the whole response is compared once.
MatchEvidence keyword_hit(std::string_view response, std::string_view keyword, double threshold);

struct CoverageResult {
  double coverage = 0.0;  // matched keywords / total keywords
  std::vector<MatchEvidence> evidence;
};

/// Coverage of must-hit keywords. The caller guarantees a non-empty list
/// (an empty list yields coverage 0 and no evidence).
CoverageResult count_coverage(std::string_view response, const std::vector<std::string>& must_hit,
                              double threshold);

struct AvoidResult {
  int false_terms = 0;  // distinct must-avoid keywords present
  std::vector<MatchEvidence> evidence;
};

/// Counts distinct must-avoid keywords that match; repeated occurrences of the
/// same term count once.
AvoidResult count_avoids(std::string_view response, const std::vector<std::string>& must_avoid,
                         double threshold);

}  // namespace wafersage::matching
