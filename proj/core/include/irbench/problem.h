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

#ifndef IRBENCH_PROBLEM_H_
#define IRBENCH_PROBLEM_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "irbench/rational.h"

namespace irbench {

enum class SourceTag { kClean, kGsmicStyle, kOther };

std::string_view SourceTagName(SourceTag tag);

// One math word problem with its exact gold answer.
struct ProblemRecord {
  std::string id;
  std::string question;
  Rational gold_answer;
  std::optional<std::string> gold_rationale;
  SourceTag source_tag = SourceTag::kClean;
  // The answer field exactly as it appeared in the source file, kept so that
  // saving a loaded corpus reproduces it byte for byte. Empty for records
  // built in code; the writer then renders gold_answer.
  std::string raw_answer;

  friend bool operator==(const ProblemRecord&, const ProblemRecord&) = default;
};

enum class TemplateKind {
  kNumericRatio,
  kNumericInteger,
  kNumericPercentage,
  kOpinion,
};

inline constexpr TemplateKind kAllTemplateKinds[] = {
    TemplateKind::kNumericRatio, TemplateKind::kNumericInteger,
    TemplateKind::kNumericPercentage, TemplateKind::kOpinion};

std::string_view TemplateKindName(TemplateKind kind);
// Throws Error(kInvalidArgument) for unknown names.
TemplateKind ParseTemplateKind(std::string_view name);

// A problem with one inserted distractor sentence.
//
// question is the perturbed text. Removing distractor_sentence (and the
// single joining space) at insertion_index gives back base.question exactly.
struct PerturbedProblem {
  ProblemRecord base;
  std::string question;
  std::string distractor_sentence;
  std::size_t insertion_index = 0;  // sentence position; 0 = before the first
  TemplateKind template_kind = TemplateKind::kOpinion;
  std::string role_used;

  friend bool operator==(const PerturbedProblem&,
                         const PerturbedProblem&) = default;
};

}  // namespace irbench

#endif  // IRBENCH_PROBLEM_H_
