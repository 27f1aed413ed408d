// SPDX-License-Identifier: Apache-2.0
#include "wafersage/synthesis.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "wafersage/errors.hpp"
#include "wafersage/matching.hpp"
#include "wafersage/prompts.hpp"

namespace wafersage::synthesis {

std::string_view descriptor_prompt(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::FullAnalysis:
      return prompts::kStage0FullAnalysis;
    case DescriptorKind::SpatialOnly:
      return prompts::kStage0SpatialOnly;
    case DescriptorKind::RootCauseOnly:
      return prompts::kStage0RootCauseOnly;
    case DescriptorKind::StructuredJson:
      return prompts::kStage0StructuredJson;
  }
  return prompts::kStage0FullAnalysis;
}

std::string stage0_describe(const std::string& image_ref, DescriptorKind kind,
                            transport::ChatTransport& transport, const std::string& model) {
  transport::ChatRequest request;
  request.model = model;
  request.messages = {{"user", std::string(descriptor_prompt(kind)), image_ref}};
  const transport::ChatReply reply = transport.complete(request);
  if (util::trim(reply.content).empty()) {
    throw EmptyReplyError("stage 0 returned an empty description for " + image_ref);
  }
  return reply.content;
}

Stage1Result stage1_rubric(const std::string& description, transport::ChatTransport& transport,
                           const std::string& model, int repair_rounds) {
  std::string prompt =
      std::string(prompts::kStage1Rubric) + "\n\nAnalysis:\n" + description + "\n";

  std::string last_error = "no reply";
  for (int attempt = 0; attempt <= repair_rounds; ++attempt) {
    transport::ChatRequest request;
    request.model = model;
    request.messages = {{"user", prompt, std::nullopt}};
    const transport::ChatReply reply = transport.complete(request);

    try {
      auto obj = util::extract_json_object(reply.content);
      if (!obj) throw SchemaError("reply contains no JSON object");
      Stage1Result result;
      result.rubric = rubric::rubric_from_json(*obj);
      result.repair_rounds = attempt;
      return result;
    } catch (const Error& e) {
      last_error = e.what();
      prompt += "\nYour previous output was invalid: " + last_error +
                "\nReturn corrected JSON only.\n";
    }
  }
  throw UnrepairableRubricError("rubric still invalid after " + std::to_string(repair_rounds) +
                                " repair rounds: " + last_error);
}

bool check_leakage(const std::string& question, const std::vector<std::string>& defect_types) {
  // hyphen-insensitive canonical form: normalize, then hyphens become spaces
  const auto canonical_tokens = [](const std::string& text) {
    std::string norm = matching::normalize(text);
    for (char& c : norm) {
      if (c == '-') c = ' ';
    }
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < norm.size()) {
      const std::size_t space = norm.find(' ', pos);
      const std::size_t end = (space == std::string::npos) ? norm.size() : space;
      if (end > pos) tokens.push_back(norm.substr(pos, end - pos));
      if (space == std::string::npos) break;
      pos = space + 1;
    }
    return tokens;
  };

  const std::vector<std::string> q_tokens = canonical_tokens(question);
  for (const auto& label : defect_types) {
    const std::vector<std::string> l_tokens = canonical_tokens(label);
    if (l_tokens.empty()) continue;

    // contiguous whole-word subsequence
    if (l_tokens.size() <= q_tokens.size()) {
      for (std::size_t start = 0; start + l_tokens.size() <= q_tokens.size(); ++start) {
        if (std::equal(l_tokens.begin(), l_tokens.end(), q_tokens.begin() + start)) return true;
      }
    }
    // fused form: "edgering" for "Edge-Ring"
    if (l_tokens.size() > 1) {
      std::string fused;
      for (const auto& t : l_tokens) fused += t;
      for (const auto& qt : q_tokens) {
        if (qt == fused) return true;
      }
    }
  }
  return false;
}

namespace {

struct Quota {
  QuestionType type;
  int min;
  int max;
};

constexpr std::array<Quota, 5> kQuotas = {{{QuestionType::DefectType, 1, 2},
                                           {QuestionType::Spatial, 2, 3},
                                           {QuestionType::Morphology, 2, 3},
                                           {QuestionType::RootCause, 1, 2},
                                           {QuestionType::Consistency, 1, 2}}};
constexpr int kMinTotal = 8;
constexpr int kMaxTotal = 10;

int count_terminators(const std::string& text) {
  return static_cast<int>(
      std::count_if(text.begin(), text.end(), [](char c) { return c == '.' || c == '!' || c == '?'; }));
}

/// Parses and validates one reply; invalid pairs are counted, not kept.
std::vector<VQAPair> parse_vqa_reply(const std::string& reply, const rubric::Rubric& rubric,
                                     const std::string& wafer_id, int& dropped) {
  std::vector<VQAPair> pairs;
  auto arr = util::extract_json_array(reply);
  if (!arr) return pairs;
  for (const auto& el : *arr) {
    if (!el.is_object()) {
      ++dropped;
      continue;
    }
    VQAPair pair;
    pair.wafer_id = wafer_id;
    if (el.contains("question") && el.at("question").is_string()) {
      pair.question = el.at("question").get<std::string>();
    }
    if (el.contains("answer") && el.at("answer").is_string()) {
      pair.answer = el.at("answer").get<std::string>();
    }
    std::string type_str = el.contains("question_type") && el.at("question_type").is_string()
                               ? el.at("question_type").get<std::string>()
                               : "";
    std::string diff_str = el.contains("difficulty") && el.at("difficulty").is_string()
                               ? el.at("difficulty").get<std::string>()
                               : "easy";
    const auto type = question_type_from_string(type_str);
    const auto diff = difficulty_tag_from_string(diff_str);
    if (pair.question.empty() || pair.answer.empty() || !type || !diff ||
        count_terminators(pair.answer) > 3 || check_leakage(pair.question, rubric.defect_types)) {
      ++dropped;
      continue;
    }
    pair.question_type = *type;
    pair.difficulty_tag = *diff;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

/// Quota-respecting selection: first the per-category minimum (earliest
/// pairs), then fill to the total cap in pool order. Empty result when a
/// minimum cannot be met.
std::vector<VQAPair> select_with_quotas(const std::vector<VQAPair>& pool) {
  std::map<QuestionType, int> kept_count;
  std::vector<bool> selected(pool.size(), false);
  int total = 0;

  for (const Quota& q : kQuotas) {
    int need = q.min;
    for (std::size_t i = 0; i < pool.size() && need > 0; ++i) {
      if (!selected[i] && pool[i].question_type == q.type) {
        selected[i] = true;
        ++kept_count[q.type];
        ++total;
        --need;
      }
    }
    if (need > 0) return {};  // a category minimum is unreachable
  }

  for (std::size_t i = 0; i < pool.size() && total < kMaxTotal; ++i) {
    if (selected[i]) continue;
    const auto quota = std::find_if(kQuotas.begin(), kQuotas.end(), [&](const Quota& q) {
      return q.type == pool[i].question_type;
    });
    if (kept_count[pool[i].question_type] < quota->max) {
      selected[i] = true;
      ++kept_count[pool[i].question_type];
      ++total;
    }
  }
  if (total < kMinTotal) return {};

  std::vector<VQAPair> out;
  out.reserve(total);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (selected[i]) out.push_back(pool[i]);
  }
  return out;
}

}  // namespace

PipelineTransports PipelineTransports::single(transport::ChatTransport& t) {
  PipelineTransports p;
  p.stage0 = &t;
  p.stage1 = &t;
  p.stage2 = &t;
  return p;
}

Stage2Result stage2_vqa(const rubric::Rubric& rubric, const std::string& full_analysis,
                        transport::ChatTransport& transport, const std::string& model,
                        const std::string& wafer_id) {
  const std::string base_prompt = std::string(prompts::kStage2Vqa) +
                                  std::string(prompts::kStage2FormatSuffix) +
                                  "\n\nRubric JSON:\n" + rubric::to_json(rubric).dump(2) +
                                  "\n\nFull analysis:\n" + full_analysis + "\n";

  Stage2Result result;
  const auto ask = [&](const std::string& prompt) {
    transport::ChatRequest request;
    request.model = model;
    request.messages = {{"user", prompt, std::nullopt}};
    return transport.complete(request).content;
  };

  std::vector<VQAPair> pool =
      parse_vqa_reply(ask(base_prompt), rubric, wafer_id, result.dropped);
  std::vector<VQAPair> chosen = select_with_quotas(pool);

  if (chosen.empty()) {
    result.regenerated = true;
    const std::string retry_prompt =
        base_prompt +
        "\nThe previous set was insufficient; generate a fresh, complete set obeying all "
        "quotas.\n";
    std::vector<VQAPair> extra =
        parse_vqa_reply(ask(retry_prompt), rubric, wafer_id, result.dropped);
    std::set<std::string> seen;
    for (const auto& p : pool) seen.insert(p.question);
    for (auto& p : extra) {
      if (seen.insert(p.question).second) pool.push_back(std::move(p));
    }
    chosen = select_with_quotas(pool);
  }

  if (chosen.empty()) {
    throw QuotaUnmetError("only " + std::to_string(pool.size()) +
                          " valid pairs; quotas unmet for wafer " + wafer_id);
  }
  result.pairs = std::move(chosen);
  return result;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::vector<ManifestEntry> manifest;
  for (const auto& row : util::read_jsonl(path)) {
    ManifestEntry entry;
    entry.wafer_id = row.at("wafer_id").get<std::string>();
    if (row.contains("image_path")) entry.image_path = row.at("image_path").get<std::string>();
    manifest.push_back(std::move(entry));
  }
  return manifest;
}

util::ordered_json RunReport::to_json() const {
  util::ordered_json errs = util::ordered_json::array();
  for (const auto& [wafer, message] : errors) {
    errs.push_back({{"wafer_id", wafer}, {"error", message}});
  }
  return {{"total", total},     {"succeeded", succeeded},       {"skipped", skipped},
          {"repairs", repairs}, {"dropped_pairs", dropped_pairs}, {"errors", errs}};
}

namespace {

struct WaferOutput {
  bool ok = false;
  bool skipped = false;
  std::string error;
  util::ordered_json descriptor_row;
  util::ordered_json rubric_row;
  std::vector<util::ordered_json> vqa_rows;
  int repairs = 0;
  int dropped = 0;
};

bool existing_outputs_valid(const std::string& wafer_id, const util::ordered_json* desc_row,
                            const util::ordered_json* rubric_row,
                            const std::vector<util::ordered_json>& vqa_rows) {
  if (desc_row == nullptr || rubric_row == nullptr) return false;
  for (const char* field : {"full_analysis", "spatial_only", "root_cause_only",
                            "structured_json"}) {
    if (!desc_row->contains(field) || !desc_row->at(field).is_string()) return false;
  }
  if (desc_row->at("full_analysis").get<std::string>().empty()) return false;

  rubric::Rubric r;
  try {
    r = rubric::rubric_from_json(*rubric_row);
  } catch (const Error&) {
    return false;
  }

  if (vqa_rows.size() < static_cast<std::size_t>(kMinTotal) ||
      vqa_rows.size() > static_cast<std::size_t>(kMaxTotal)) {
    return false;
  }
  std::map<QuestionType, int> counts;
  for (const auto& row : vqa_rows) {
    if (!row.contains("question") || !row.contains("answer") || !row.contains("question_type")) {
      return false;
    }
    const auto type = question_type_from_string(row.at("question_type").get<std::string>());
    if (!type) return false;
    ++counts[*type];
    if (check_leakage(row.at("question").get<std::string>(), r.defect_types)) return false;
  }
  for (const Quota& q : kQuotas) {
    const int c = counts.count(q.type) ? counts[q.type] : 0;
    if (c < q.min || c > q.max) return false;
  }
  (void)wafer_id;
  return true;
}

}  // namespace

RunReport run_pipeline(const std::vector<ManifestEntry>& manifest,
                       const PipelineTransports& transports,
                       const std::filesystem::path& out_dir, const PipelineOptions& options) {
  if (transports.stage0 == nullptr || transports.stage1 == nullptr ||
      transports.stage2 == nullptr) {
    throw Error("run_pipeline needs a transport for every stage");
  }
  std::filesystem::create_directories(out_dir);

  const auto desc_path = out_dir / "descriptors.jsonl";
  const auto rubric_path = out_dir / "rubrics.jsonl";
  const auto vqa_path = out_dir / "vqa.jsonl";

  // index existing outputs for resumability
  std::map<std::string, util::ordered_json> old_desc;
  std::map<std::string, util::ordered_json> old_rubric;
  std::map<std::string, std::vector<util::ordered_json>> old_vqa;
  const auto load_existing = [](const std::filesystem::path& p) {
    return std::filesystem::exists(p) ? util::read_jsonl(p) : std::vector<util::ordered_json>{};
  };
  for (auto& row : load_existing(desc_path)) {
    if (row.contains("wafer_id")) old_desc[row.at("wafer_id").get<std::string>()] = row;
  }
  for (auto& row : load_existing(rubric_path)) {
    if (row.contains("wafer_id")) old_rubric[row.at("wafer_id").get<std::string>()] = row;
  }
  for (auto& row : load_existing(vqa_path)) {
    if (row.contains("wafer_id")) {
      old_vqa[row.at("wafer_id").get<std::string>()].push_back(row);
    }
  }

  RunReport report;
  report.total = manifest.size();

  std::vector<WaferOutput> outputs(manifest.size());
  util::run_indexed(manifest.size(), options.max_in_flight, [&](std::size_t i) {
    const ManifestEntry& entry = manifest[i];
    WaferOutput& out = outputs[i];

    const auto* desc_row =
        old_desc.count(entry.wafer_id) ? &old_desc.at(entry.wafer_id) : nullptr;
    const auto* rubric_row =
        old_rubric.count(entry.wafer_id) ? &old_rubric.at(entry.wafer_id) : nullptr;
    static const std::vector<util::ordered_json> kNoRows;
    const auto& vqa_rows = old_vqa.count(entry.wafer_id) ? old_vqa.at(entry.wafer_id) : kNoRows;
    if (existing_outputs_valid(entry.wafer_id, desc_row, rubric_row, vqa_rows)) {
      out.ok = true;
      out.skipped = true;
      out.descriptor_row = *desc_row;
      out.rubric_row = *rubric_row;
      out.vqa_rows = vqa_rows;
      return;
    }

    try {
      DescriptorSet set;
      set.wafer_id = entry.wafer_id;
      set.full_analysis = stage0_describe(entry.image_path, DescriptorKind::FullAnalysis,
                                          *transports.stage0, transports.stage0_model);
      set.spatial_only = stage0_describe(entry.image_path, DescriptorKind::SpatialOnly,
                                         *transports.stage0, transports.stage0_model);
      set.root_cause_only = stage0_describe(entry.image_path, DescriptorKind::RootCauseOnly,
                                            *transports.stage0, transports.stage0_model);
      set.structured_json = stage0_describe(entry.image_path, DescriptorKind::StructuredJson,
                                            *transports.stage0, transports.stage0_model);

      Stage1Result stage1 = stage1_rubric(set.full_analysis, *transports.stage1,
                                          transports.stage1_model, options.repair_rounds);
      stage1.rubric.wafer_id = entry.wafer_id;
      out.repairs = stage1.repair_rounds;

      Stage2Result stage2 = stage2_vqa(stage1.rubric, set.full_analysis, *transports.stage2,
                                       transports.stage2_model, entry.wafer_id);
      out.dropped = stage2.dropped;

      out.descriptor_row = {{"wafer_id", set.wafer_id},
                            {"full_analysis", set.full_analysis},
                            {"spatial_only", set.spatial_only},
                            {"root_cause_only", set.root_cause_only},
                            {"structured_json", set.structured_json}};
      out.rubric_row = rubric::to_json(stage1.rubric);
      for (const VQAPair& pair : stage2.pairs) {
        out.vqa_rows.push_back({{"wafer_id", pair.wafer_id},
                                {"question", pair.question},
                                {"answer", pair.answer},
                                {"question_type", std::string(to_string(pair.question_type))},
                                {"difficulty_tag", std::string(to_string(pair.difficulty_tag))}});
      }
      out.ok = true;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });

  std::vector<util::ordered_json> desc_rows;
  std::vector<util::ordered_json> rubric_rows;
  std::vector<util::ordered_json> vqa_rows;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    WaferOutput& out = outputs[i];
    if (out.ok) {
      ++report.succeeded;
      if (out.skipped) ++report.skipped;
      report.repairs += out.repairs;
      report.dropped_pairs += out.dropped;
      desc_rows.push_back(std::move(out.descriptor_row));
      rubric_rows.push_back(std::move(out.rubric_row));
      for (auto& row : out.vqa_rows) vqa_rows.push_back(std::move(row));
    } else {
      report.errors.emplace_back(manifest[i].wafer_id, out.error);
    }
  }

  util::write_file_atomic(desc_path, util::to_jsonl(desc_rows));
  util::write_file_atomic(rubric_path, util::to_jsonl(rubric_rows));
  util::write_file_atomic(vqa_path, util::to_jsonl(vqa_rows));
  util::write_file_atomic(out_dir / "run_report.json", report.to_json().dump(2) + "\n");
  return report;
}

}  // namespace wafersage::synthesis
