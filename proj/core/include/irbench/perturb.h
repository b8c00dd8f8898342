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

#ifndef IRBENCH_PERTURB_H_
#define IRBENCH_PERTURB_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irbench/problem.h"
#include "irbench/rational.h"

namespace irbench {

inline constexpr std::string_view kRoleSlot = "[ROLE]";
inline constexpr std::string_view kNumericSlot = "[NUMERIC_CONTENT]";
// Optional third slot: the item noun that follows the first number in the
// question ("6 shirts" -> "shirts"), used to keep distractors on topic.
inline constexpr std::string_view kItemSlot = "[ITEM]";

struct DistractorTemplate {
  TemplateKind kind = TemplateKind::kOpinion;
  std::string pattern;

  friend bool operator==(const DistractorTemplate&,
                         const DistractorTemplate&) = default;
};

// Subjective-judgment markers; every opinion template must contain one.
std::span<const std::string_view> OpinionMarkers();

// Throws Error(kInvalidArgument) unless [ROLE] and [NUMERIC_CONTENT] each
// occur exactly once, [ITEM] at most once, and opinion patterns carry a
// marker.
void ValidateTemplate(const DistractorTemplate& tmpl);

// The ten shipped templates (reconstructions; at least two per kind).
const std::vector<DistractorTemplate>& BuiltinTemplates();

// JSONL of {"kind": str, "pattern": str}; every row is validated.
std::vector<DistractorTemplate> LoadTemplates(
    const std::filesystem::path& path);

// Capitalized names in order of first occurrence, deduplicated. Falls back
// to a single generic role when the question names nobody.
std::vector<std::string> ExtractRoles(std::string_view question);

// Generic roles used when no name is found.
std::span<const std::string_view> FallbackRoles();

// Relation nouns used to derive family/classmate roles ("Ann's brother").
std::span<const std::string_view> RelationNouns();

// Picks a role from the extracted names, sometimes as a relative of one.
std::string ChooseRole(std::span<const std::string> roles, std::uint64_t seed);

// First "<number> <noun>" item noun in the question, or "items".
std::string ExtractItemNoun(std::string_view question);

struct FillOptions {
  std::string role;
  std::vector<Rational> numbers_in_question;
  // When set, no number equal to it may appear in the output.
  std::optional<Rational> gold_answer;
  std::string item = "items";
};

// Substitutes the slots. The number is drawn deterministically from seed
// within a band anchored to the question's numbers; it is redrawn while it
// collides with the gold answer. Ratio renders as "N times", percentage as
// "N%", integer and opinion bare. The result ends with a terminator.
// Throws Error(kGeneration) when a slot survives substitution or no
// gold-free rendering is found.
std::string FillTemplate(const DistractorTemplate& tmpl,
                         const FillOptions& options, std::uint64_t seed);

// True when text contains the value as a standalone number token ("25%"
// counts as 1/4 here).
bool ContainsNumberToken(std::string_view text, const Rational& value);

// Number of sentence positions a distractor can occupy: sentences + 1.
std::size_t InsertionSlots(std::string_view question);

// Inserts sentence before sentence insertion_index of problem.question
// (after the last one when insertion_index equals the sentence count),
// joined by a single space.
// Throws Error(kOutOfRange) for a bad index, Error(kInvalidArgument) for an
// empty sentence or one that contains the gold answer as a number token.
PerturbedProblem InsertDistractor(const ProblemRecord& problem,
                                  std::string_view sentence,
                                  std::size_t insertion_index,
                                  TemplateKind kind = TemplateKind::kOpinion,
                                  std::string role_used = {});

// Inverse of InsertDistractor. Throws Error(kCorruption) when the recorded
// distractor is not where the record says it is.
ProblemRecord StripDistractor(const PerturbedProblem& perturbed);

// Moves the distractor to a uniformly drawn slot (possibly the same one).
PerturbedProblem ShuffleDistractorPosition(const PerturbedProblem& perturbed,
                                           std::uint64_t seed);

// Recovers a PerturbedProblem from a question that already contains the
// distractor verbatim. Throws Error(kCorruption) if it is absent or cannot
// be removed cleanly.
PerturbedProblem PerturbedFromText(std::string_view question,
                                   std::string_view distractor,
                                   TemplateKind kind = TemplateKind::kOpinion);

// Where to put the distractor when generating.
struct Placement {
  static Placement At(std::size_t index) { return {false, index}; }
  static Placement Shuffled() { return {true, 0}; }
  bool shuffle = false;
  std::size_t index = 0;
};

// End-to-end GSMIR-style generation for one problem: chooses a template
// from the list, a role, fills it and inserts it. Deterministic in seed.
PerturbedProblem PerturbProblem(const ProblemRecord& problem,
                                std::span<const DistractorTemplate> templates,
                                std::uint64_t seed,
                                Placement placement = Placement::At(0));

}  // namespace irbench

#endif  // IRBENCH_PERTURB_H_
