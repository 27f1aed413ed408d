// SPDX-License-Identifier: Apache-2.0
#include "wafersage/curation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "wafersage/errors.hpp"

namespace wafersage::curation {

namespace {

constexpr char kMagic[4] = {'W', 'S', 'E', 'M'};

double squared_distance(std::span<const float> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - b[i];
    total += d * d;
  }
  return total;
}

double squared_distance(std::span<const float> a, std::span<const float> b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    total += d * d;
  }
  return total;
}

void check_record(const EmbeddingRecord& rec, std::size_t dim) {
  if (rec.vector.size() != dim) {
    throw DimensionMismatchError("wafer \"" + rec.wafer_id + "\" has dimension " +
                                 std::to_string(rec.vector.size()) + ", expected " +
                                 std::to_string(dim));
  }
  for (float v : rec.vector) {
    if (!std::isfinite(v)) {
      throw FormatError("wafer \"" + rec.wafer_id + "\" has a non-finite component");
    }
  }
}

/// Canonical processing order: (wafer_id, label, vector bytes). Makes every
/// seeded draw independent of input record order.
std::vector<std::size_t> canonical_order(std::span<const EmbeddingRecord> records) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const EmbeddingRecord& ra = records[a];
    const EmbeddingRecord& rb = records[b];
    if (ra.wafer_id != rb.wafer_id) return ra.wafer_id < rb.wafer_id;
    if (ra.label != rb.label) return ra.label < rb.label;
    return std::lexicographical_compare(ra.vector.begin(), ra.vector.end(), rb.vector.begin(),
                                        rb.vector.end());
  });
  return order;
}

std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void append_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void append_u16le(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

std::vector<EmbeddingRecord> load_embeddings_binary(const std::string& content,
                                                    const std::string& origin) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(content.data());
  if (content.size() < 12) throw FormatError(origin + ": truncated header");
  const std::uint32_t count = read_u32le(bytes + 4);
  const std::uint32_t dim = read_u32le(bytes + 8);
  const std::size_t float_bytes = static_cast<std::size_t>(count) * dim * sizeof(float);
  if (content.size() < 12 + float_bytes) throw FormatError(origin + ": truncated float block");

  std::vector<EmbeddingRecord> records(count);
  std::size_t pos = 12;
  for (std::uint32_t i = 0; i < count; ++i) {
    records[i].vector.resize(dim);
    std::memcpy(records[i].vector.data(), content.data() + pos, dim * sizeof(float));
    pos += dim * sizeof(float);
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    for (auto* field : {&records[i].wafer_id, &records[i].label}) {
      if (pos + 2 > content.size()) throw FormatError(origin + ": truncated string table");
      const std::uint16_t len = static_cast<std::uint16_t>(bytes[pos]) |
                                (static_cast<std::uint16_t>(bytes[pos + 1]) << 8);
      pos += 2;
      if (pos + len > content.size()) throw FormatError(origin + ": truncated string table");
      field->assign(content.data() + pos, len);
      pos += len;
    }
  }
  for (const auto& rec : records) check_record(rec, dim);
  return records;
}

}  // namespace

std::vector<EmbeddingRecord> load_embeddings(const std::filesystem::path& path) {
  const std::string content = util::read_file(path);
  if (content.size() >= 4 && std::memcmp(content.data(), kMagic, 4) == 0) {
    return load_embeddings_binary(content, path.string());
  }

  std::vector<EmbeddingRecord> records;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const std::size_t nl = content.find('\n', pos);
    const std::size_t end = (nl == std::string::npos) ? content.size() : nl;
    const std::string line = util::trim(std::string_view(content).substr(pos, end - pos));
    ++lineno;
    if (!line.empty()) {
      util::ordered_json j;
      try {
        j = util::ordered_json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
      if (!(lineno == 1 && util::is_header_line(j))) {
        EmbeddingRecord rec;
        try {
          rec.wafer_id = j.at("wafer_id").get<std::string>();
          rec.label = j.at("label").get<std::string>();
          for (const auto& v : j.at("vector")) rec.vector.push_back(v.get<float>());
        } catch (const nlohmann::json::exception& e) {
          throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        records.push_back(std::move(rec));
      }
    }
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  if (records.empty()) throw FormatError(path.string() + ": no embedding records");
  const std::size_t dim = records.front().vector.size();
  for (const auto& rec : records) check_record(rec, dim);
  return records;
}

void write_embeddings_jsonl(const std::filesystem::path& path,
                            std::span<const EmbeddingRecord> records) {
  std::vector<util::ordered_json> rows;
  rows.reserve(records.size());
  for (const auto& rec : records) {
    rows.push_back({{"wafer_id", rec.wafer_id}, {"label", rec.label}, {"vector", rec.vector}});
  }
  util::write_file_atomic(path, util::to_jsonl(rows));
}

void write_embeddings_binary(const std::filesystem::path& path,
                             std::span<const EmbeddingRecord> records) {
  const std::size_t dim = records.empty() ? 0 : records.front().vector.size();
  std::string out;
  out.append(kMagic, 4);
  append_u32le(out, static_cast<std::uint32_t>(records.size()));
  append_u32le(out, static_cast<std::uint32_t>(dim));
  for (const auto& rec : records) {
    if (rec.vector.size() != dim) {
      throw DimensionMismatchError("cannot serialize mixed dimensions");
    }
    const auto* p = reinterpret_cast<const char*>(rec.vector.data());
    out.append(p, dim * sizeof(float));
  }
  for (const auto& rec : records) {
    for (const std::string* field : {&rec.wafer_id, &rec.label}) {
      if (field->size() > std::numeric_limits<std::uint16_t>::max()) {
        throw FormatError("string field too long for binary format");
      }
      append_u16le(out, static_cast<std::uint16_t>(field->size()));
      out.append(*field);
    }
  }
  util::write_file_atomic(path, out);
}

ClusterModel kmeans(std::span<const EmbeddingRecord> records, int k, std::uint64_t seed,
                    int max_iter, double tol) {
  const std::size_t n = records.size();
  if (k < 1) throw InsufficientDataError("k must be at least 1");
  if (static_cast<std::size_t>(k) > n) {
    throw InsufficientDataError("k = " + std::to_string(k) + " exceeds record count " +
                                std::to_string(n));
  }
  const std::size_t dim = records.front().vector.size();
  for (const auto& rec : records) check_record(rec, dim);

  const std::vector<std::size_t> order = canonical_order(records);
  std::mt19937_64 rng(seed);
  const auto uniform01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  // k-means++ seeding over the canonical order.
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
  {
    const std::size_t first = order[rng() % n];
    centroids.emplace_back(records[first].vector.begin(), records[first].vector.end());
  }
  while (centroids.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t i = order[pos];
      min_sq[i] = std::min(min_sq[i], squared_distance(records[i].vector, centroids.back()));
      total += min_sq[i];
    }
    std::size_t chosen = order[0];
    if (total > 0.0) {
      const double target = uniform01() * total;
      double cum = 0.0;
      for (std::size_t pos = 0; pos < n; ++pos) {
        const std::size_t i = order[pos];
        cum += min_sq[i];
        if (cum >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      // every point coincides with a centroid; cycle deterministically
      chosen = order[centroids.size() % n];
    }
    centroids.emplace_back(records[chosen].vector.begin(), records[chosen].vector.end());
  }

  ClusterModel model;
  model.k = k;
  model.assignments.assign(n, 0);
  model.distances.assign(n, 0.0);

  std::vector<double> sq(n, 0.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    // assignment pass
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        const double d = squared_distance(records[i].vector, centroids[c]);
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      model.assignments[i] = best_c;
      sq[i] = best;
      inertia += best;
    }
    model.inertia_history.push_back(inertia);
    model.inertia = inertia;

    // update pass
    std::vector<std::vector<double>> next(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t i = order[pos];
      const int c = model.assignments[i];
      ++counts[c];
      for (std::size_t d = 0; d < dim; ++d) next[c][d] += static_cast<double>(records[i].vector[d]);
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // reseed an empty cluster from the farthest point
        std::size_t farthest = order[0];
        double far_d = -1.0;
        for (std::size_t pos = 0; pos < n; ++pos) {
          const std::size_t i = order[pos];
          if (sq[i] > far_d) {
            far_d = sq[i];
            farthest = i;
          }
        }
        next[c].assign(records[farthest].vector.begin(), records[farthest].vector.end());
      } else {
        for (std::size_t d = 0; d < dim; ++d) next[c][d] /= static_cast<double>(counts[c]);
      }
    }

    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double delta = next[c][d] - centroids[c][d];
        s += delta * delta;
      }
      shift = std::max(shift, std::sqrt(s));
    }
    centroids = std::move(next);
    if (shift < tol) break;
  }

  // final assignment against the converged centroids
  double inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (int c = 0; c < k; ++c) {
      const double d = squared_distance(records[i].vector, centroids[c]);
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    model.assignments[i] = best_c;
    model.distances[i] = std::sqrt(best);
    inertia += best;
  }
  model.inertia_history.push_back(inertia);
  model.inertia = inertia;
  model.centroids = std::move(centroids);
  return model;
}

double silhouette(std::span<const EmbeddingRecord> records, const ClusterModel& model) {
  const std::size_t n = records.size();
  if (model.k < 2 || n < 2) return 0.0;

  std::vector<std::size_t> cluster_size(model.k, 0);
  for (int c : model.assignments) ++cluster_size[c];

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> mean_dist(model.k, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      mean_dist[model.assignments[j]] +=
          std::sqrt(squared_distance(records[i].vector, records[j].vector));
    }
    const int own = model.assignments[i];
    double a = 0.0;
    if (cluster_size[own] > 1) {
      a = mean_dist[own] / static_cast<double>(cluster_size[own] - 1);
    }
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < model.k; ++c) {
      if (c == own || cluster_size[c] == 0) continue;
      b = std::min(b, mean_dist[c] / static_cast<double>(cluster_size[c]));
    }
    if (cluster_size[own] <= 1 || !std::isfinite(b)) continue;  // undefined, contributes 0
    total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(n);
}

int choose_k(std::span<const EmbeddingRecord> records, std::uint64_t seed, int k_min, int k_max) {
  const std::size_t n = records.size();
  if (n < 3 || k_min < 2) return 1;
  k_max = std::min<int>(k_max, static_cast<int>(n) - 1);
  if (k_max < k_min) return 1;

  int best_k = k_min;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int k = k_min; k <= k_max; ++k) {
    const ClusterModel model = kmeans(records, k, seed);
    const double score = silhouette(records, model);
    if (score > best_score) {
      best_score = score;
      best_k = k;
    }
  }
  return best_k;
}

SampleManifest balanced_sample(const ClusterModel& model,
                               std::span<const EmbeddingRecord> records, int n_near, int n_far) {
  SampleManifest manifest;
  if (records.size() != model.assignments.size()) {
    throw Error("record count does not match the cluster model");
  }

  for (int c = 0; c < model.k; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (model.assignments[i] == c) members.push_back(i);
    }
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      if (model.distances[a] != model.distances[b]) {
        return model.distances[a] < model.distances[b];
      }
      return records[a].wafer_id < records[b].wafer_id;
    });

    int near_take = n_near;
    int far_take = n_far;
    if (static_cast<std::size_t>(n_near + n_far) > members.size()) {
      near_take = std::min<int>(n_near, static_cast<int>(members.size()));
      far_take = std::min<int>(far_take, static_cast<int>(members.size()) - near_take);
      manifest.warnings.push_back("cluster " + std::to_string(c) + " has only " +
                                  std::to_string(members.size()) +
                                  " records; sample truncated");
    }

    for (int i = 0; i < near_take; ++i) {
      const std::size_t idx = members[i];
      manifest.rows.push_back({records[idx].wafer_id, records[idx].label, c, "near",
                               model.distances[idx]});
    }
    for (int i = 0; i < far_take; ++i) {
      const std::size_t idx = members[members.size() - 1 - i];  // largest distance first
      manifest.rows.push_back({records[idx].wafer_id, records[idx].label, c, "far",
                               model.distances[idx]});
    }
  }
  return manifest;
}

std::vector<std::size_t> flag_outliers(const ClusterModel& model,
                                       std::span<const EmbeddingRecord> records,
                                       double percentile) {
  if (records.size() != model.assignments.size()) {
    throw Error("record count does not match the cluster model");
  }
  std::vector<std::size_t> flagged;
  for (int c = 0; c < model.k; ++c) {
    std::vector<double> dists;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (model.assignments[i] == c) {
        dists.push_back(model.distances[i]);
        members.push_back(i);
      }
    }
    if (dists.empty()) continue;

    // linear-interpolation quantile over the sorted distances
    std::vector<double> sorted = dists;
    std::sort(sorted.begin(), sorted.end());
    const double pos = (percentile / 100.0) * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    const double threshold = sorted[lo] + frac * (sorted[hi] - sorted[lo]);

    for (std::size_t m = 0; m < members.size(); ++m) {
      if (dists[m] > threshold) flagged.push_back(members[m]);
    }
  }
  std::sort(flagged.begin(), flagged.end());
  return flagged;
}

util::ordered_json sample_row_to_json(const SampleRow& row) {
  return {{"wafer_id", row.wafer_id},
          {"label", row.label},
          {"cluster", row.cluster},
          {"tag", row.tag},
          {"distance", row.distance}};
}

std::vector<Projected2D> pca_project_2d(std::span<const EmbeddingRecord> records) {
  std::vector<Projected2D> out;
  if (records.empty()) return out;
  const std::size_t n = records.size();
  const std::size_t dim = records.front().vector.size();

  std::vector<double> mean(dim, 0.0);
  for (const auto& rec : records) {
    for (std::size_t d = 0; d < dim; ++d) mean[d] += static_cast<double>(rec.vector[d]);
  }
  for (double& m : mean) m /= static_cast<double>(n);

  // centered data, row major
  std::vector<double> centered(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      centered[i * dim + d] = static_cast<double>(records[i].vector[d]) - mean[d];
    }
  }

  const auto multiply_cov = [&](const std::vector<double>& v) {
    // (X^T X) v without forming the covariance matrix
    std::vector<double> xv(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t d = 0; d < dim; ++d) s += centered[i * dim + d] * v[d];
      xv[i] = s;
    }
    std::vector<double> out_vec(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < dim; ++d) out_vec[d] += centered[i * dim + d] * xv[i];
    }
    return out_vec;
  };

  std::vector<std::vector<double>> components;
  for (int comp = 0; comp < 2; ++comp) {
    std::vector<double> v(dim, 0.0);
    // deterministic start vector
    for (std::size_t d = 0; d < dim; ++d) v[d] = 1.0 / std::sqrt(static_cast<double>(dim) + d);
    for (int it = 0; it < 200; ++it) {
      std::vector<double> w = multiply_cov(v);
      for (const auto& prev : components) {
        double dot = 0.0;
        for (std::size_t d = 0; d < dim; ++d) dot += w[d] * prev[d];
        for (std::size_t d = 0; d < dim; ++d) w[d] -= dot * prev[d];
      }
      double norm = 0.0;
      for (double x : w) norm += x * x;
      norm = std::sqrt(norm);
      if (norm < 1e-12) break;
      for (double& x : w) x /= norm;
      double delta = 0.0;
      for (std::size_t d = 0; d < dim; ++d) delta += (w[d] - v[d]) * (w[d] - v[d]);
      v = std::move(w);
      if (delta < 1e-14) break;
    }
    // sign convention: largest-magnitude entry positive
    std::size_t arg = 0;
    for (std::size_t d = 1; d < dim; ++d) {
      if (std::abs(v[d]) > std::abs(v[arg])) arg = d;
    }
    if (v[arg] < 0.0) {
      for (double& x : v) x = -x;
    }
    components.push_back(std::move(v));
  }

  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Projected2D p;
    p.wafer_id = records[i].wafer_id;
    p.label = records[i].label;
    for (std::size_t d = 0; d < dim; ++d) {
      p.x += centered[i * dim + d] * components[0][d];
      p.y += centered[i * dim + d] * components[1][d];
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::map<std::string, std::vector<std::size_t>> group_by_label(
    std::span<const EmbeddingRecord> records) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    groups[records[i].label].push_back(i);
  }
  return groups;
}

}  // namespace wafersage::curation
