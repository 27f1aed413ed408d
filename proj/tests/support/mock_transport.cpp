// SPDX-License-Identifier: Apache-2.0
#include "mock_transport.hpp"

#include "wafersage/prompts.hpp"
#include "wafersage/util.hpp"

namespace mock {

namespace {

using wafersage::util::ordered_json;

std::string descriptor_text(const std::string& marker, const std::string& kind) {
  return "Wafer " + marker + " (" + kind +
         "): a dense cluster occupies the wafer center with an annular band near the edge; "
         "pattern density is high and the texture is grainy. Likely origin is the wet "
         "processing step.";
}

std::string rubric_json(const std::string& marker) {
  ordered_json r = {
      {"defect_types", {"Donut"}},
      {"spatial_rubric",
       {{"zone", "Center, Edge, Annular band " + marker},
        {"distribution", "Clustered, Ring pattern"},
        {"clock_position", "6 o'clock"},
        {"coordinates_hint", "radius 0.8"},
        {"spatial_avoid", {"Top-right quadrant", "Uniform distribution"}}}},
      {"morphology_rubric",
       {{"pattern_type", "Dense cluster, Annular band"},
        {"density", "High-density"},
        {"geometric_structure", "Ring, Cluster"},
        {"texture_description", "Grainy"},
        {"morphology_avoid", {"Linear streak", "Grid-like"}}}},
      {"root_cause_rubric",
       {{"equipment_category", "Wet process tool"},
        {"process_step", "Wet clean, Rinse"},
        {"potential_causes", {"Nozzle clog " + marker, "Chemical residue"}},
        {"root_cause_avoid", {"Photolithography misalignment"}}}},
      {"summary", "Donut-style annular defect band for " + marker}};
  return "Here is the rubric you asked for:\n```json\n" + r.dump(2) + "\n```";
}

std::string vqa_json(const std::string& marker) {
  const auto pair = [&](const std::string& q, const std::string& a, const std::string& type,
                        const std::string& diff) {
    return ordered_json{
        {"question", q}, {"answer", a}, {"question_type", type}, {"difficulty", diff}};
  };
  ordered_json arr = ordered_json::array();
  arr.push_back(pair("What kind of failure signature does this wafer map show?",
                     "An annular band of failing dies surrounds a dense central cluster.",
                     "defect_type", "easy"));
  arr.push_back(pair("Which broad category best fits the visible pattern for " + marker + "?",
                     "A ring-shaped systematic pattern rather than random noise.",
                     "defect_type", "medium"));
  arr.push_back(pair("Where are the failing dies concentrated?",
                     "They concentrate at the wafer center and along an annular band near the "
                     "edge.",
                     "spatial", "easy"));
  arr.push_back(pair("Is the lower half of the wafer affected?",
                     "Yes, the band extends through the 6 o'clock region.", "spatial", "easy"));
  arr.push_back(pair("How far from the notch does the band sit?",
                     "The band sits at roughly 0.8 of the wafer radius.", "spatial", "medium"));
  arr.push_back(pair("How dense is the failing region?",
                     "The central cluster is high-density with a grainy texture.", "morphology",
                     "easy"));
  arr.push_back(pair("What geometric structure does the outer feature form?",
                     "It forms a closed ring around the center cluster.", "morphology",
                     "medium"));
  arr.push_back(pair("Which process step most plausibly caused this?",
                     "A wet clean step, most likely a clogged rinse nozzle.", "root_cause",
                     "medium"));
  arr.push_back(pair("Does the pattern look uniform across the wafer?",
                     "No, it is strongly localized in a ring and the center.", "consistency",
                     "easy"));
  return arr.dump(2);
}

}  // namespace

std::string synthesis_reply(const wafersage::transport::ChatRequest& request) {
  const std::string marker = wafer_marker(request);
  const std::string& content = request.messages.front().content;
  const auto starts_with = [&](std::string_view prefix) {
    return content.rfind(prefix, 0) == 0;
  };
  if (starts_with(wafersage::prompts::kStage0FullAnalysis)) {
    return descriptor_text(marker, "full");
  }
  if (starts_with(wafersage::prompts::kStage0SpatialOnly)) {
    return descriptor_text(marker, "spatial");
  }
  if (starts_with(wafersage::prompts::kStage0RootCauseOnly)) {
    return descriptor_text(marker, "rootcause");
  }
  if (starts_with(wafersage::prompts::kStage0StructuredJson)) {
    return "{\"defect_types\": [\"Donut\"], \"note\": \"" + marker + "\"}";
  }
  if (starts_with(wafersage::prompts::kStage1Rubric)) {
    return rubric_json(marker);
  }
  if (starts_with(wafersage::prompts::kStage2Vqa)) {
    return vqa_json(marker);
  }
  throw wafersage::TransportError("mock: unrecognized prompt");
}

}  // namespace mock
