// Copyright 2026 The irbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IRBENCH_EXTRACTION_H_
#define IRBENCH_EXTRACTION_H_

#include <optional>
#include <string>
#include <string_view>

#include "irbench/rational.h"

namespace irbench {

enum class ExtractionMethod { kSentinel, kLastNumber, kNone };

std::string_view ExtractionMethodName(ExtractionMethod method);
ExtractionMethod ParseExtractionMethod(std::string_view name);

struct ExtractedAnswer {
  std::optional<Rational> value;
  ExtractionMethod method = ExtractionMethod::kNone;
  std::string raw_tail;

  friend bool operator==(const ExtractedAnswer&,
                         const ExtractedAnswer&) = default;
};

// The first number after the last "the answer is" (any case); otherwise the
// last standalone number; otherwise nothing. "25%" reads as 25. Total: never
// throws, for any byte string.
ExtractedAnswer ExtractFinalAnswer(std::string_view completion);

// Exact rational equality; an absent value is wrong.
bool ScoreAnswer(const ExtractedAnswer& extracted, const Rational& gold);

enum class RecognitionCategory {
  kIrrelevantCorrect,
  kOtherInformation,
  kNoIrrelevant,
};

std::string_view RecognitionCategoryName(RecognitionCategory category);
RecognitionCategory ParseRecognitionCategory(std::string_view name);

struct IdentificationVerdict {
  RecognitionCategory category = RecognitionCategory::kNoIrrelevant;
  double matched_score = 0.0;
  std::optional<std::string> claimed_span;

  friend bool operator==(const IdentificationVerdict&,
                         const IdentificationVerdict&) = default;
};

inline constexpr double kDefaultIdThreshold = 0.6;

// Lowercase, punctuation removed, whitespace collapsed.
std::string NormalizeForMatch(std::string_view text);

// SQuAD-style bag-of-tokens F1 over normalized text. Two empty inputs
// score 1.
double TokenF1(std::string_view a, std::string_view b);

// "no irrelevant information" in any case, optionally led by "there is" /
// "there are" and followed by a few filler words ("exists", "in the
// question").
bool IsNoIrrelevantClaim(std::string_view text);

// Classifies one identification attempt. The claimed span also counts as a
// no-irrelevant claim when it is the sentinel phrase. threshold in (0, 1];
// Throws Error(kInvalidArgument) otherwise.
IdentificationVerdict MatchIdentification(
    const std::optional<std::string>& claimed_span,
    std::string_view true_distractor, bool no_irrelevant_claimed,
    double threshold = kDefaultIdThreshold);

inline constexpr std::string_view kProcessedContextMarker =
    "Processed Context:";

// Trimmed text after the last "Processed Context:". Throws Error(kParse)
// when the marker is missing or nothing follows it.
std::string ParseFiltration(std::string_view completion);

// Text after the last "the answer is" (any case), trimmed, with a trailing
// ']' dropped; the whole trimmed completion if the phrase is absent.
std::string ExtractIdentificationClaim(std::string_view completion);

}  // namespace irbench

#endif  // IRBENCH_EXTRACTION_H_
