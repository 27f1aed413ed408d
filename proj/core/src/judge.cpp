// SPDX-License-Identifier: Apache-2.0
#include "wafersage/judge.hpp"

#include <cmath>
#include <regex>

#include "wafersage/errors.hpp"

namespace wafersage::judge {

double JudgeVerdict::dimension(Dimension d) const {
  switch (d) {
    case Dimension::Spatial:
      return spatial;
    case Dimension::Morphology:
      return morphology;
    case Dimension::RootCause:
      return root_cause;
  }
  return spatial;
}

util::ordered_json JudgeVerdict::to_json() const {
  return {{"spatial", spatial},
          {"morphology", morphology},
          {"root_cause", root_cause},
          {"overall", overall},
          {"overall_derived", overall_derived},
          {"model_id", model_id}};
}

JudgeVerdict JudgeVerdict::from_json(const util::ordered_json& j) {
  JudgeVerdict v;
  v.spatial = j.at("spatial").get<double>();
  v.morphology = j.at("morphology").get<double>();
  v.root_cause = j.at("root_cause").get<double>();
  if (j.contains("overall")) {
    v.overall = j.at("overall").get<double>();
  } else {
    v.overall = (v.spatial + v.morphology + v.root_cause) / 3.0;
    v.overall_derived = true;
  }
  if (j.contains("overall_derived")) v.overall_derived = j.at("overall_derived").get<bool>();
  if (j.contains("model_id")) v.model_id = j.at("model_id").get<std::string>();
  return v;
}

std::string build_judge_prompt(const std::string& question, const std::string& response,
                               const rubric::Rubric& rubric, bool include_rubric) {
  std::string prompt;
  prompt += "You are an expert reviewer of semiconductor wafer defect analyses.\n";
  prompt += "Rate the candidate answer on a 1-10 Likert scale for each dimension:\n";
  prompt += "- spatial: accuracy of defect location and distribution\n";
  prompt += "- morphology: accuracy of pattern, shape and density description\n";
  prompt += "- root_cause: plausibility of the process/equipment attribution\n";

  if (include_rubric) {
    prompt += "\nDefect types present: ";
    for (std::size_t i = 0; i < rubric.defect_types.size(); ++i) {
      if (i > 0) prompt += ", ";
      prompt += rubric.defect_types[i];
    }
    prompt += "\n";
    if (rubric.summary && !rubric.summary->empty()) {
      prompt += "Reference summary: " + *rubric.summary + "\n";
    }
  }

  prompt += "\nQuestion: " + question + "\n";
  prompt += "Candidate answer: " + response + "\n";
  prompt += "\nReply with exactly one JSON object of the form\n";
  prompt += "{\"spatial\": <1-10>, \"morphology\": <1-10>, \"root_cause\": <1-10>, "
            "\"overall\": <1-10>}\n";
  return prompt;
}

namespace {

void check_range(double value, const std::string& name) {
  if (!(value >= 1.0 && value <= 10.0)) {
    throw OutOfRangeError(name + " score " + std::to_string(value) + " outside [1, 10]");
  }
}

// Balanced-brace JSON candidates, tried in order of appearance.
std::optional<util::ordered_json> first_json_object_with_scores(const std::string& text) {
  for (std::size_t start = text.find('{'); start != std::string::npos;
       start = text.find('{', start + 1)) {
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
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        --depth;
        if (depth == 0) {
          auto j = util::ordered_json::parse(text.substr(start, i - start + 1), nullptr, false);
          if (!j.is_discarded() && j.is_object() && j.contains("spatial") &&
              j.contains("morphology") && j.contains("root_cause") &&
              j.at("spatial").is_number() && j.at("morphology").is_number() &&
              j.at("root_cause").is_number()) {
            return j;
          }
          break;  // well-bracketed but not a verdict; try the next '{'
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

JudgeVerdict parse_verdict(const std::string& reply_text) {
  if (reply_text.empty()) throw UnparseableError("empty judge reply");

  JudgeVerdict v;
  v.raw_text = reply_text;

  if (auto j = first_json_object_with_scores(reply_text)) {
    v.spatial = j->at("spatial").get<double>();
    v.morphology = j->at("morphology").get<double>();
    v.root_cause = j->at("root_cause").get<double>();
    check_range(v.spatial, "spatial");
    check_range(v.morphology, "morphology");
    check_range(v.root_cause, "root_cause");
    if (j->contains("overall") && j->at("overall").is_number()) {
      v.overall = j->at("overall").get<double>();
      check_range(v.overall, "overall");
    } else {
      v.overall = (v.spatial + v.morphology + v.root_cause) / 3.0;
      v.overall_derived = true;
    }
    return v;
  }

  // Fallback: "dimension: number" pairs anywhere in the prose.
  static const std::regex pair_re(
      R"((spatial|morphology|root[ _]cause|overall)\s*[:=]\s*([0-9]+(?:\.[0-9]+)?))",
      std::regex::icase);
  std::optional<double> spatial, morphology, root_cause, overall;
  for (auto it = std::sregex_iterator(reply_text.begin(), reply_text.end(), pair_re);
       it != std::sregex_iterator(); ++it) {
    std::string name = util::to_lower((*it)[1].str());
    const double value = std::stod((*it)[2].str());
    check_range(value, name);
    if (name == "spatial" && !spatial) spatial = value;
    if (name == "morphology" && !morphology) morphology = value;
    if ((name == "root cause" || name == "root_cause") && !root_cause) root_cause = value;
    if (name == "overall" && !overall) overall = value;
  }
  if (!spatial || !morphology || !root_cause) {
    throw UnparseableError("no per-dimension scores found in judge reply");
  }
  v.spatial = *spatial;
  v.morphology = *morphology;
  v.root_cause = *root_cause;
  if (overall) {
    v.overall = *overall;
  } else {
    v.overall = (v.spatial + v.morphology + v.root_cause) / 3.0;
    v.overall_derived = true;
  }
  return v;
}

namespace {

std::string cache_key(const std::string& model, const std::string& prompt) {
  return util::sha256_hex(model + "\x1f" + kPromptVersion + "\x1f" + prompt);
}

}  // namespace

std::vector<JudgeOutcome> judge_items(const std::vector<scoring::EvalItem>& items,
                                      const scoring::RubricLookup& rubrics,
                                      const transport::TransportProfile& profile,
                                      transport::ChatTransport& transport,
                                      const JudgeOptions& options) {
  if (!options.cache_dir.empty()) std::filesystem::create_directories(options.cache_dir);

  std::vector<JudgeOutcome> outcomes(items.size());
  util::run_indexed(items.size(), profile.max_in_flight, [&](std::size_t i) {
    const scoring::EvalItem& item = items[i];
    JudgeOutcome& out = outcomes[i];
    out.id = item.id;

    const rubric::Rubric* r = rubrics(item.wafer_id);
    if (r == nullptr) {
      out.error = "no rubric for wafer_id \"" + item.wafer_id + "\"";
      return;
    }

    const std::string prompt =
        build_judge_prompt(item.question, item.response, *r, options.include_rubric);
    const std::string key = cache_key(profile.model, prompt);
    const std::filesystem::path cache_file =
        options.cache_dir.empty() ? std::filesystem::path{}
                                  : options.cache_dir / (key + ".json");

    if (!cache_file.empty() && std::filesystem::exists(cache_file)) {
      try {
        const auto cached = util::ordered_json::parse(util::read_file(cache_file));
        JudgeVerdict v = JudgeVerdict::from_json(cached.at("verdict"));
        v.raw_text = cached.value("raw_text", "");
        out.verdict = std::move(v);
        out.from_cache = true;
        return;
      } catch (const std::exception&) {
        // fall through to a fresh fetch on a corrupt cache entry
      }
    }

    try {
      transport::ChatRequest request;
      request.model = profile.model;
      request.messages = {{"user", prompt, std::nullopt}};
      const transport::ChatReply reply = transport.complete(request);
      JudgeVerdict v = parse_verdict(reply.content);
      v.model_id = profile.model;
      if (!cache_file.empty()) {
        util::ordered_json entry = {{"key", key},
                                    {"model", profile.model},
                                    {"prompt_version", kPromptVersion},
                                    {"verdict", v.to_json()},
                                    {"raw_text", reply.content}};
        util::write_file_atomic(cache_file, entry.dump() + "\n");
      }
      out.verdict = std::move(v);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });
  return outcomes;
}

util::ordered_json outcome_to_json(const JudgeOutcome& outcome) {
  util::ordered_json j = util::ordered_json::object();
  j["id"] = outcome.id;
  if (!outcome.error.empty()) {
    j["error"] = outcome.error;
    return j;
  }
  const JudgeVerdict& v = *outcome.verdict;
  j["spatial"] = v.spatial;
  j["morphology"] = v.morphology;
  j["root_cause"] = v.root_cause;
  j["overall"] = v.overall;
  j["overall_derived"] = v.overall_derived;
  j["model_id"] = v.model_id;
  j["from_cache"] = outcome.from_cache;
  return j;
}

}  // namespace wafersage::judge
