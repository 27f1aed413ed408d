// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "commands.hpp"
#include "wafersage/curation.hpp"
#include "wafersage/errors.hpp"

namespace wafersage::cli {

int run_curate(const CurateArgs& args) {
  RunConfig config = args.common.resolve();
  if (!args.embeddings.empty()) config.embeddings = args.embeddings;
  if (config.embeddings.empty()) {
    std::cerr << "curate: --embeddings is required\n";
    return kExitUsage;
  }

  const std::vector<curation::EmbeddingRecord> records =
      curation::load_embeddings(config.embeddings);

  OutDirLock lock(config.out_dir);

  // clustering stays within each labeled category
  std::map<std::string, std::vector<std::size_t>> groups;
  if (args.per_label) {
    groups = curation::group_by_label(records);
  } else {
    auto& all = groups["*"];
    for (std::size_t i = 0; i < records.size(); ++i) all.push_back(i);
  }

  std::vector<util::ordered_json> manifest_rows;
  std::vector<util::ordered_json> outlier_rows;
  util::ordered_json label_summaries = util::ordered_json::object();

  for (const auto& [label, indices] : groups) {
    std::vector<curation::EmbeddingRecord> subset;
    subset.reserve(indices.size());
    for (std::size_t i : indices) subset.push_back(records[i]);

    const std::uint64_t label_seed = config.seed ^ util::fnv1a64(label);
    int k = args.k;
    if (k <= 0) k = curation::choose_k(subset, label_seed);
    k = std::min<int>(k, static_cast<int>(subset.size()));

    const curation::ClusterModel model = curation::kmeans(subset, k, label_seed);
    const curation::SampleManifest sample =
        curation::balanced_sample(model, subset, args.n_near, args.n_far);
    for (const auto& row : sample.rows) {
      manifest_rows.push_back(curation::sample_row_to_json(row));
    }
    for (const auto& warning : sample.warnings) {
      std::cerr << "curate: " << label << ": " << warning << "\n";
    }

    for (std::size_t idx : curation::flag_outliers(model, subset, args.percentile)) {
      outlier_rows.push_back({{"wafer_id", subset[idx].wafer_id},
                              {"label", subset[idx].label},
                              {"cluster", model.assignments[idx]},
                              {"distance", model.distances[idx]}});
    }

    label_summaries[label] = {{"records", subset.size()},
                              {"k", model.k},
                              {"inertia", model.inertia},
                              {"silhouette",
                               model.k >= 2 ? curation::silhouette(subset, model) : 0.0}};
  }

  const auto header = make_header(config.eval, config.seed);
  util::write_file_atomic(std::filesystem::path(config.out_dir) / "sample_manifest.jsonl",
                          jsonl_with_header(header, manifest_rows));
  util::write_file_atomic(std::filesystem::path(config.out_dir) / "outliers.jsonl",
                          jsonl_with_header(header, outlier_rows));

  util::ordered_json summary = util::ordered_json::object();
  summary["header"] = header.at("header");
  summary["labels"] = label_summaries;
  util::write_file_atomic(std::filesystem::path(config.out_dir) / "curate_summary.json",
                          summary.dump(2) + "\n");

  if (!args.pca_out.empty()) {
    std::vector<util::ordered_json> pca_rows;
    for (const auto& p : curation::pca_project_2d(records)) {
      pca_rows.push_back(
          {{"wafer_id", p.wafer_id}, {"label", p.label}, {"x", p.x}, {"y", p.y}});
    }
    util::write_file_atomic(std::filesystem::path(config.out_dir) / args.pca_out,
                            jsonl_with_header(header, pca_rows));
  }

  if (config.verbosity > 0) {
    std::cout << "curate: " << manifest_rows.size() << " sampled, " << outlier_rows.size()
              << " outliers across " << groups.size() << " labels\n";
  }
  return kExitOk;
}

}  // namespace wafersage::cli
