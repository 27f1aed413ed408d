// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wafersage/util.hpp"

namespace wafersage::curation {

struct EmbeddingRecord {
  std::string wafer_id;
  std::string label;
  std::vector<float> vector;
};

/// Loads embeddings from JSONL ({"wafer_id","label","vector":[...]}) or the
/// binary format (sniffed via the WSEM magic). Rejects NaN/Inf components and
/// mixed dimensions.
std::vector<EmbeddingRecord> load_embeddings(const std::filesystem::path& path);

void write_embeddings_jsonl(const std::filesystem::path& path,
                            std::span<const EmbeddingRecord> records);

/// Binary layout: magic "WSEM", u32 LE record count, u32 LE dimension,
/// row-major float32 data, then per record a u16 LE length-prefixed wafer_id
/// and label (the trailing string table keeps ids and labels round-trippable).
void write_embeddings_binary(const std::filesystem::path& path,
                             std::span<const EmbeddingRecord> records);

struct ClusterModel {
  int k = 0;
  std::vector<std::vector<double>> centroids;
  std::vector<int> assignments;     // per input record
  std::vector<double> distances;    // Euclidean distance to own centroid
  double inertia = 0.0;             // total within-cluster squared distance
  std::vector<double> inertia_history;  // one entry per assignment pass
};

/// Lloyd iterations with k-means++ seeding. Deterministic for a fixed seed and
/// invariant to input record order (records are processed in a canonical
/// order internally). Empty clusters are reseeded from the farthest point.
/// Throws InsufficientDataError when k > n or k < 1.
ClusterModel kmeans(std::span<const EmbeddingRecord> records, int k, std::uint64_t seed,
                    int max_iter = 100, double tol = 1e-6);

/// Mean silhouette coefficient over all records (k >= 2).
double silhouette(std::span<const EmbeddingRecord> records, const ClusterModel& model);

/// Picks k in [k_min, k_max] maximizing the silhouette score (ties prefer the
/// smaller k). Falls back to 1 when there are too few records to split.
int choose_k(std::span<const EmbeddingRecord> records, std::uint64_t seed, int k_min = 2,
             int k_max = 8);

struct SampleRow {
  std::string wafer_id;
  std::string label;
  int cluster = 0;
  std::string tag;  // "near" or "far"
  double distance = 0.0;
};

struct SampleManifest {
  std::vector<SampleRow> rows;
  std::vector<std::string> warnings;  // truncation notes
};

/// Per cluster, the n_near smallest-distance and n_far largest-distance
/// records; distance ties break by wafer_id so the output is invariant to
/// input order. Clusters smaller than n_near + n_far are truncated with a
/// warning.
SampleManifest balanced_sample(const ClusterModel& model,
                               std::span<const EmbeddingRecord> records, int n_near, int n_far);

/// Records whose distance to their own centroid exceeds the given percentile
/// of their cluster's distance distribution (linear-interpolation quantile).
std::vector<std::size_t> flag_outliers(const ClusterModel& model,
                                       std::span<const EmbeddingRecord> records,
                                       double percentile);

util::ordered_json sample_row_to_json(const SampleRow& row);

struct Projected2D {
  std::string wafer_id;
  std::string label;
  double x = 0.0;
  double y = 0.0;
};

/// PCA projection onto the top two principal components (power iteration with
/// deflation, deterministic). Supports visual inspection only.
std::vector<Projected2D> pca_project_2d(std::span<const EmbeddingRecord> records);

/// Groups record indices by label, labels in sorted order.
std::map<std::string, std::vector<std::size_t>> group_by_label(
    std::span<const EmbeddingRecord> records);

}  // namespace wafersage::curation
