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

#ifndef IRBENCH_PROMPTS_H_
#define IRBENCH_PROMPTS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irbench/gateway.h"
#include "irbench/problem.h"
#include "irbench/rational.h"

namespace irbench {

enum class MethodKind {
  kSp,
  kCot,
  kZeroCot,
  kLtm,
  kIp,
  kIdentifyIr,
  kIdentifyShuffleIr,
  kAtf,
};

// CLI spelling: sp, cot, 0cot, ltm, ip, identify, identify-shuffle, atf.
std::string_view MethodFlagName(MethodKind kind);
// Display label: SP, COT, 0-COT, LTM, IP, Identify-Ir-Prompt, ...
std::string_view MethodLabel(MethodKind kind);
MethodKind ParseMethodKind(std::string_view name);
bool IsReasoningMethod(MethodKind kind);  // SP, COT, 0-COT, LTM, IP

inline constexpr std::string_view kAnswerSentinel = "The answer is";
inline constexpr std::string_view kZeroCotTrigger = "Let's think step by step";
inline constexpr std::string_view kZeroCotAnswerCue =
    "Therefore, the answer (arabic numerals) is";
inline constexpr std::string_view kLtmLead = "To solve this, we need to answer:";
inline constexpr std::string_view kIdentifyProbe =
    "Does the question contain any irrelevant information? If yes, what is "
    "the irrelevant information?";
inline constexpr std::string_view kNoIrrelevantPhrase =
    "no irrelevant information";
inline constexpr std::string_view kDefaultIpInstruction =
    "Feel free to ignore irrelevant information in the problem description.";

struct Demonstration {
  std::string question;
  std::optional<std::string> rationale;      // chain of thought
  std::optional<std::string> ltm_rationale;  // "1) ... 2) ..." decomposition
  Rational final_answer;
  bool has_distractor = false;
  std::optional<std::string> distractor;

  friend bool operator==(const Demonstration&, const Demonstration&) = default;
};

struct DemoSet {
  std::vector<Demonstration> demos;
  std::string sampling_descriptor;
  std::uint64_t rng_seed = 0;

  friend bool operator==(const DemoSet&, const DemoSet&) = default;
};

// JSONL: {"question", "rationale", "ltm_rationale", "answer",
// "has_distractor", "distractor"}.
std::vector<Demonstration> LoadDemonstrations(
    const std::filesystem::path& path);

struct DemoComposition {
  std::size_t with_distractor = 6;
  std::size_t clean = 4;
};

// Draws the distractor-bearing and clean demonstrations without
// replacement and shuffles them together. Pools must not share a question.
// Throws Error(kInvalidArgument) for short or overlapping pools.
DemoSet SampleDemoSet(std::span<const Demonstration> distractor_pool,
                      std::span<const Demonstration> clean_pool,
                      std::uint64_t seed, DemoComposition composition = {});

// Splits a mixed pool on has_distractor, then samples.
DemoSet SampleDemoSet(std::span<const Demonstration> pool, std::uint64_t seed,
                      DemoComposition composition = {});

// Builders. Every prompt is a single user message; the test question comes
// last, exactly once.
PromptBundle BuildSpPrompt(const DemoSet& demos, std::string_view question,
                           const DecodingParams& decoding = {});
// Throws Error(kInvalidArgument) if a demo has no rationale.
PromptBundle BuildCotPrompt(const DemoSet& demos, std::string_view question,
                            const DecodingParams& decoding = {});
// Throws Error(kInvalidArgument) if a demo has no decomposition rationale.
PromptBundle BuildLtmPrompt(const DemoSet& demos, std::string_view question,
                            const DecodingParams& decoding = {});
// Throws Error(kInvalidArgument) for an empty instruction.
PromptBundle BuildIpPrompt(const DemoSet& demos, std::string_view question,
                           std::string_view instruction = kDefaultIpInstruction,
                           const DecodingParams& decoding = {});

// Zero-shot CoT is two calls: reasoning, then answer extraction.
struct ZeroCotPrompts {
  std::string question;
  DecodingParams decoding;

  PromptBundle Stage1() const;
  PromptBundle Stage2(std::string_view stage1_output) const;
};
ZeroCotPrompts BuildZeroCotPrompts(std::string_view question,
                                   const DecodingParams& decoding = {});

// Two-call least-to-most: decompose, then solve given the decomposition.
PromptBundle BuildLtmDecomposePrompt(const DemoSet& demos,
                                     std::string_view question,
                                     const DecodingParams& decoding = {});
PromptBundle BuildLtmSolvePrompt(const DemoSet& demos,
                                 std::string_view question,
                                 std::string_view decomposition,
                                 const DecodingParams& decoding = {});

struct IdentifyDemo {
  std::string question;
  // Set for distractor-bearing demos; needed for position shuffling.
  std::optional<PerturbedProblem> perturbed;
  std::string expected_identification;
};

// Distractor demos expect their distractor, clean ones the
// no-irrelevant-information phrase.
std::vector<IdentifyDemo> IdentifyDemosFrom(const DemoSet& demos);

// With shuffle_seed set, each distractor demo is relocated first
// (Identify-Shuffle-Ir-Prompt).
PromptBundle BuildIdentifyPrompt(std::span<const IdentifyDemo> demos,
                                 std::string_view question,
                                 std::optional<std::uint64_t> shuffle_seed,
                                 const DecodingParams& decoding = {});

}  // namespace irbench

#endif  // IRBENCH_PROMPTS_H_
