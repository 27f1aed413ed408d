// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace wafersage {

/// The three evaluation dimensions every answer is scored on.
enum class Dimension { Spatial, Morphology, RootCause };

inline constexpr std::array<Dimension, 3> kAllDimensions = {
    Dimension::Spatial, Dimension::Morphology, Dimension::RootCause};

constexpr std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::Spatial:
      return "spatial";
    case Dimension::Morphology:
      return "morphology";
    case Dimension::RootCause:
      return "root_cause";
  }
  return "spatial";
}

std::optional<Dimension> dimension_from_string(std::string_view s);

/// Question categories tracked in training-example metadata.
enum class QuestionType { DefectType, Spatial, Morphology, RootCause, Consistency };

inline constexpr std::array<QuestionType, 5> kAllQuestionTypes = {
    QuestionType::DefectType, QuestionType::Spatial, QuestionType::Morphology,
    QuestionType::RootCause, QuestionType::Consistency};

constexpr std::string_view to_string(QuestionType q) {
  switch (q) {
    case QuestionType::DefectType:
      return "defect_type";
    case QuestionType::Spatial:
      return "spatial";
    case QuestionType::Morphology:
      return "morphology";
    case QuestionType::RootCause:
      return "root_cause";
    case QuestionType::Consistency:
      return "consistency";
  }
  return "defect_type";
}

std::optional<QuestionType> question_type_from_string(std::string_view s);

enum class DifficultyTag { Easy, Medium };

constexpr std::string_view to_string(DifficultyTag t) {
  return t == DifficultyTag::Easy ? "easy" : "medium";
}

std::optional<DifficultyTag> difficulty_tag_from_string(std::string_view s);

}  // namespace wafersage
