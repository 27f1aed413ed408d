// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wafersage/rubric.hpp"
#include "wafersage/transport.hpp"
#include "wafersage/types.hpp"

namespace wafersage::synthesis {

enum class DescriptorKind { FullAnalysis, SpatialOnly, RootCauseOnly, StructuredJson };

constexpr std::string_view to_string(DescriptorKind k) {
  switch (k) {
    case DescriptorKind::FullAnalysis:
      return "full_analysis";
    case DescriptorKind::SpatialOnly:
      return "spatial_only";
    case DescriptorKind::RootCauseOnly:
      return "root_cause_only";
    case DescriptorKind::StructuredJson:
      return "structured_json";
  }
  return "full_analysis";
}

/// The verbatim system prompt used for a descriptor kind.
std::string_view descriptor_prompt(DescriptorKind kind);

struct DescriptorSet {
  std::string wafer_id;
  std::string full_analysis;
  std::string spatial_only;
  std::string root_cause_only;
  std::string structured_json;  // informational; not schema-validated
};

/// One stage-0 call: the kind's prompt plus the image reference. Raises
/// EmptyReplyError on a blank reply; transport-level retries live in the
/// transport itself.
std::string stage0_describe(const std::string& image_ref, DescriptorKind kind,
                            transport::ChatTransport& transport, const std::string& model);

struct Stage1Result {
  rubric::Rubric rubric;
  int repair_rounds = 0;
};

/// Converts an analysis into a validated rubric. Invalid replies are
/// re-prompted with the validation error appended, up to repair_rounds extra
/// attempts; raises UnrepairableRubricError when every attempt fails.
Stage1Result stage1_rubric(const std::string& description, transport::ChatTransport& transport,
                           const std::string& model, int repair_rounds = 2);

struct VQAPair {
  std::string wafer_id;
  std::string question;
  std::string answer;
  QuestionType question_type = QuestionType::Spatial;
  DifficultyTag difficulty_tag = DifficultyTag::Easy;
};

/// True (leaky) when any defect label occurs whole-word in the question,
/// case- and hyphen-insensitively. Note "center" as a location word triggers
/// this for a Center wafer; the rule is absolute by design.
bool check_leakage(const std::string& question, const std::vector<std::string>& defect_types);

struct Stage2Result {
  std::vector<VQAPair> pairs;
  int dropped = 0;      // pairs removed by validation
  bool regenerated = false;
};

/// Generates 8-10 VQA pairs satisfying the per-category quotas
/// (defect_type 1-2, spatial 2-3, morphology 2-3, root_cause 1-2,
/// consistency 1-2) with zero leakage. One regeneration round is attempted
/// when validation leaves fewer than 8 pairs; raises QuotaUnmetError when the
/// quotas still cannot be met.
Stage2Result stage2_vqa(const rubric::Rubric& rubric, const std::string& full_analysis,
                        transport::ChatTransport& transport, const std::string& model,
                        const std::string& wafer_id);

struct ManifestEntry {
  std::string wafer_id;
  std::string image_path;
};

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

struct PipelineTransports {
  transport::ChatTransport* stage0 = nullptr;
  transport::ChatTransport* stage1 = nullptr;
  transport::ChatTransport* stage2 = nullptr;
  std::string stage0_model = "descriptor-model";
  std::string stage1_model = "rubric-model";
  std::string stage2_model = "vqa-model";

  /// All three stages on one transport.
  static PipelineTransports single(transport::ChatTransport& t);
};

struct PipelineOptions {
  int max_in_flight = 1;
  int repair_rounds = 2;
};

struct RunReport {
  std::size_t total = 0;
  std::size_t succeeded = 0;
  std::size_t skipped = 0;  // wafers with existing valid outputs
  int repairs = 0;
  int dropped_pairs = 0;
  std::vector<std::pair<std::string, std::string>> errors;  // wafer_id -> message

  bool all_failed() const { return total > 0 && errors.size() == total; }
  util::ordered_json to_json() const;
};

/// Runs stages 0 -> 1 -> 2 for every manifest wafer, writing descriptors.jsonl,
/// rubrics.jsonl and vqa.jsonl into out_dir (plus run_report.json). Wafers
/// with existing valid outputs are skipped without transport calls, so an
/// interrupted run resumes where it stopped. Outputs are a pure function of
/// the manifest and the transport replies.
RunReport run_pipeline(const std::vector<ManifestEntry>& manifest,
                       const PipelineTransports& transports,
                       const std::filesystem::path& out_dir, const PipelineOptions& options = {});

}  // namespace wafersage::synthesis
