// SPDX-License-Identifier: Apache-2.0
// Generated from prompts/v1/*.txt; a unit test checks they stay in sync.
#include "wafersage/prompts.hpp"

namespace wafersage::prompts {

const std::string_view kStage0FullAnalysis = R"WSPROMPT(You are a semiconductor wafer defect analysis expert. Analyze the provided 
wafer map image and provide a comprehensive technical analysis including:

1. Defect Type: Identify the primary defect type (e.g., Scratch, Donut, 
   Edge-Ring, Center-Spot, Random-Spot)
2. Spatial Distribution: Describe where defects are located (zones, clock 
   positions, radial/linear patterns)
3. Morphology: Describe defect appearance (patterns, density, shapes, texture)
4. Root Cause: Provide brief equipment/process insight if pattern suggests 
   clear cause

Write in a technical, professional tone suitable for a semiconductor engineer.
)WSPROMPT";

const std::string_view kStage0SpatialOnly = R"WSPROMPT(You are a semiconductor wafer defect analysis expert. Analyze the provided 
wafer map image and describe:

1. Spatial Distribution: Where are the defects located? (center, edge, 
   specific regions, clock positions)
2. Morphology: What do the defects look like? (patterns, shapes, density, 
   texture)

Provide a concise technical description focusing only on spatial and 
morphological characteristics. Do not include root cause analysis.
)WSPROMPT";

const std::string_view kStage0RootCauseOnly = R"WSPROMPT(You are a semiconductor process engineering expert. Analyze the provided 
wafer map image and provide:

1. Root Cause Analysis: What process or equipment issues could have caused 
   these defects?
2. Equipment Category: Which type of equipment is most likely involved? 
   (Lithography, Etching, Deposition, CMP, Wet Processing, Handling)
3. Potential Causes: List specific potential root causes based on the 
   defect pattern.

Focus only on root cause and equipment analysis.
)WSPROMPT";

const std::string_view kStage0StructuredJson = R"WSPROMPT(You are a semiconductor wafer defect analysis expert. Analyze the provided
wafer map image and emit a single JSON object summarizing the defect state
with these keys:

"defect_types": list of defect type names present
"spatial": short description of affected zones and distribution
"morphology": short description of pattern, shape and density
"root_cause": short description of the most likely process origin

Output only the JSON object, no surrounding prose.
)WSPROMPT";

const std::string_view kStage1Rubric = R"WSPROMPT(You are a semiconductor wafer defect analysis expert. Your task is to 
convert the provided wafer map analysis into a structured evaluation rubric.

The rubric should capture:
1. Spatial Distribution: Exact zones, clock positions, coordinates mentioned
2. Morphology: Pattern types, density descriptions, geometric structures
3. Root Cause: Equipment categories, process steps, specific potential causes

For each dimension, provide:
- Must-hit keywords: Terms that MUST appear in a correct answer
- Must-avoid keywords: Terms that indicate hallucination if present

Output valid JSON matching the rubric schema.
)WSPROMPT";

const std::string_view kStage2Vqa = R"WSPROMPT(You are a semiconductor wafer defect analysis expert. Your task is to 
generate diverse Visual Question Answering (VQA) pairs based on the 
provided defect rubric and full analysis.

CRITICAL: Simulate a REAL-WORLD scenario where the USER DOES NOT KNOW 
the defect type beforehand.

Generate 8-10 question-answer pairs covering:
1. Defect Type (1-2 questions)
2. Spatial (2-3 questions): Location, zone, distribution pattern
3. Morphological (2-3 questions): Pattern type, density, texture
4. Root Cause (1-2 questions): Equipment category, process step
5. Consistency (1-2 questions): Yes/no verification

CRITICAL GUIDELINES:
- NEVER mention the defect type in the QUESTIONS
- Include both easy and medium difficulty questions
- Answers should be concise but complete (1-3 sentences)
)WSPROMPT";

const std::string_view kStage2FormatSuffix = R"WSPROMPT(

OUTPUT FORMAT (STRICT):
Return ONLY a JSON array. Each element must be an object with keys
"question", "answer", "question_type" (one of "defect_type", "spatial",
"morphology", "root_cause", "consistency") and "difficulty" (one of
"easy", "medium").
)WSPROMPT";

}  // namespace wafersage::prompts
