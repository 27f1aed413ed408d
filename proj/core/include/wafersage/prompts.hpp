// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace wafersage::prompts {

/// Bumping the version invalidates caches and transcripts keyed on prompts.
inline constexpr const char* kPromptVersion = "v1";

// Stage 0 descriptor prompts, one per description kind.
extern const std::string_view kStage0FullAnalysis;
extern const std::string_view kStage0SpatialOnly;
extern const std::string_view kStage0RootCauseOnly;
/// The structured-JSON descriptor has no published prompt; this one is ours.
extern const std::string_view kStage0StructuredJson;

extern const std::string_view kStage1Rubric;

extern const std::string_view kStage2Vqa;
/// Output-format instruction appended to the stage-2 prompt (the base prompt
/// specifies content, not format). Versioned together with kPromptVersion.
extern const std::string_view kStage2FormatSuffix;

}  // namespace wafersage::prompts
