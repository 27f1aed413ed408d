// SPDX-License-Identifier: Apache-2.0
// Reference implementations kept deliberately independent of the library:
// straight textbook formulas, no shared helpers with the code under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace oracle {

inline std::size_t levenshtein_full(const std::string& a, const std::string& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<std::vector<std::size_t>> d(m + 1, std::vector<std::size_t>(n + 1, 0));
  for (std::size_t i = 0; i <= m; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= n; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
    }
  }
  return d[m][n];
}

inline double similarity_ref(const std::string& a, const std::string& b) {
  const std::size_t len = std::max(a.size(), b.size());
  if (len == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein_full(a, b)) / static_cast<double>(len);
}

inline std::vector<std::string> split_tokens(const std::string& normalized) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : normalized) {
    if (c == ' ') {
      if (!current.empty()) tokens.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

/// Exhaustive window scan under the same window-size rule as the library:
/// sizes {k} for k == 1, {k-1, k, k+1} otherwise, clipped to the response,
/// whole response when nothing fits.
inline double brute_force_best_similarity(const std::string& response_norm,
                                          const std::string& keyword_norm) {
  const auto tokens = split_tokens(response_norm);
  if (tokens.empty() || keyword_norm.empty()) return 0.0;
  const std::size_t k = split_tokens(keyword_norm).size();

  std::vector<std::size_t> sizes;
  if (k <= 1) {
    sizes.push_back(1);
  } else {
    for (std::size_t w : {k - 1, k, k + 1}) {
      if (w >= 1 && w <= tokens.size()) sizes.push_back(w);
    }
  }
  if (sizes.empty() || sizes.front() > tokens.size()) {
    sizes.assign(1, tokens.size());
  }

  double best = 0.0;
  for (std::size_t w : sizes) {
    if (w > tokens.size()) continue;
    for (std::size_t start = 0; start + w <= tokens.size(); ++start) {
      std::string window;
      for (std::size_t i = start; i < start + w; ++i) {
        if (!window.empty()) window.push_back(' ');
        window += tokens[i];
      }
      best = std::max(best, similarity_ref(window, keyword_norm));
    }
  }
  return best;
}

/// Average ranks by counting, O(n^2).
inline std::vector<double> average_ranks_ref(const std::vector<double>& v) {
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t less = 0;
    std::size_t equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++less;
      if (v[j] == v[i]) ++equal;
    }
    ranks[i] = static_cast<double>(less) + (static_cast<double>(equal) + 1.0) / 2.0;
  }
  return ranks;
}

/// Pearson over average ranks via the raw-moment formula (a different
/// algebraic route from the implementation's centered sums).
inline double spearman_ref(const std::vector<double>& x, const std::vector<double>& y) {
  const std::vector<double> rx = average_ranks_ref(x);
  const std::vector<double> ry = average_ranks_ref(y);
  const long double n = static_cast<long double>(x.size());
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += rx[i];
    sy += ry[i];
    sxx += static_cast<long double>(rx[i]) * rx[i];
    syy += static_cast<long double>(ry[i]) * ry[i];
    sxy += static_cast<long double>(rx[i]) * ry[i];
  }
  const long double num = n * sxy - sx * sy;
  const long double den = sqrtl((n * sxx - sx * sx) * (n * syy - sy * sy));
  return static_cast<double>(num / den);
}

/// Adjusted Rand index from the contingency table.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  const auto comb2 = [](double x) { return x * (x - 1.0) / 2.0; };
  std::map<std::pair<int, int>, std::size_t> joint;
  std::map<int, std::size_t> count_a;
  std::map<int, std::size_t> count_b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++count_a[a[i]];
    ++count_b[b[i]];
  }
  double sum_joint = 0, sum_a = 0, sum_b = 0;
  for (const auto& [key, c] : joint) sum_joint += comb2(static_cast<double>(c));
  for (const auto& [key, c] : count_a) sum_a += comb2(static_cast<double>(c));
  for (const auto& [key, c] : count_b) sum_b += comb2(static_cast<double>(c));
  const double total = comb2(static_cast<double>(a.size()));
  const double expected = sum_a * sum_b / total;
  const double max_index = (sum_a + sum_b) / 2.0;
  return (sum_joint - expected) / (max_index - expected);
}

/// Linear-interpolation quantile over unsorted values (numpy default).
inline double quantile_type7(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const double pos = (p / 100.0) * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace oracle
