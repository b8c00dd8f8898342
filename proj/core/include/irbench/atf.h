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

#ifndef IRBENCH_ATF_H_
#define IRBENCH_ATF_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irbench/corpus.h"
#include "irbench/gateway.h"
#include "irbench/problem.h"
#include "irbench/prompts.h"
#include "irbench/reasoning.h"

namespace irbench {

inline constexpr std::string_view kBecauseMarker = "Because";
inline constexpr std::string_view kFinallyMarker = "Finally, the answer is";
inline constexpr std::string_view kDefaultFiltrationInstruction =
    "If there is irrelevant information, please exclude it and output the "
    "context after excluding the irrelevant information. If there is no "
    "irrelevant information, please directly output the context.";

// Wording of the guided sub-prompts and the filtration instruction. The
// sub-prompts use {question}, {key_information} and {clauses} placeholders.
struct AtfPrompts {
  std::string key_information;
  std::string decomposition;
  std::string clause_analysis;
  std::string filtration_instruction;
  // System message asking for the "Processed Context:" reply form.
  std::string filtration_system;

  static AtfPrompts Defaults();
  // JSON object with any subset of the fields above; the rest default.
  static AtfPrompts Load(const std::filesystem::path& path);

  friend bool operator==(const AtfPrompts&, const AtfPrompts&) = default;
};

// A worked analysis example: question q, rationale r(q), answer a(q).
struct AnalysisDemo {
  std::string question;
  std::string analysis_rationale;
  std::string identified_answer;  // the distractor, or the no-irrelevant phrase

  friend bool operator==(const AnalysisDemo&, const AnalysisDemo&) = default;
};

// "[Q: <q>, A: Because <r(q)>, Finally, the answer is <a(q)>]"
std::string RenderAnalysisDemo(const AnalysisDemo& demo);

// Throws Error(kGeneration) when the rendered form would not parse back to
// the same rationale and answer.
void ValidateAnalysisDemo(const AnalysisDemo& demo);

// JSONL of {"question", "rationale", "answer"}.
std::vector<AnalysisDemo> LoadAnalysisDemos(const std::filesystem::path& path);
void SaveAnalysisDemos(std::span<const AnalysisDemo> demos,
                       const std::filesystem::path& path);

struct ClauseVerdict {
  std::size_t index = 0;  // 1-based, as written
  std::string clause;
  bool irrelevant = false;
  std::string reason;

  friend bool operator==(const ClauseVerdict&, const ClauseVerdict&) = default;
};

// Renders the canonical rationale text from its parts.
std::string RenderRationale(std::string_view key_information,
                            std::span<const ClauseVerdict> verdicts);

// Pulls 'sub-clause N "<text>" is relevant|irrelevant because <reason>'
// entries out of a rationale.
std::vector<ClauseVerdict> ParseClauseVerdicts(std::string_view rationale);

// Offline demo generation: three guided calls (key information,
// sub-clause decomposition, per-clause analysis) assembled into r(q), with
// a(q) taken from ground truth. Throws Error(kGeneration) naming the stage
// and raw text when a sub-completion cannot be parsed.
AnalysisDemo GenerateAnalysisDemo(const PerturbedProblem& seed_problem,
                                  Backend& backend,
                                  const AtfPrompts& prompts = AtfPrompts::Defaults(),
                                  const DecodingParams& decoding = {});
AnalysisDemo GenerateAnalysisDemo(const ProblemRecord& clean_problem,
                                  Backend& backend,
                                  const AtfPrompts& prompts = AtfPrompts::Defaults(),
                                  const DecodingParams& decoding = {});

// Relocates the distractor inside a demo question and renumbers the
// per-clause rationale to match. Clean demos come back unchanged.
AnalysisDemo ShuffleAnalysisDemo(const AnalysisDemo& demo, std::uint64_t seed);

struct AnalysisOutcome {
  std::vector<SentenceSpan> clauses;
  std::vector<ClauseVerdict> verdicts;  // empty unless one per clause
  std::string rationale;                // r(p)
  std::optional<std::string> identified_span;  // a(p); absent = none found
  std::string raw_completion;
};

// Demonstrations, then "Q: <p>, A: Because"; the model continues.
PromptBundle BuildAnalysisPrompt(std::span<const AnalysisDemo> demos,
                                 std::string_view question,
                                 const DecodingParams& decoding = {});

// a(p) is everything after the last "Finally, the answer is". Throws
// Error(kParse) when the marker is missing.
AnalysisOutcome ParseAnalysisCompletion(std::string_view question,
                                        std::string_view completion);

// Throws Error(kInvalidArgument) with no demos, Error(kParse) as above.
AnalysisOutcome RunAnalysis(std::string_view question,
                            std::span<const AnalysisDemo> demos,
                            Backend& backend,
                            const DecodingParams& decoding = {});

struct FiltrationOutcome {
  std::string processed_context;  // p'
  bool removed_any = false;
  std::string raw_completion;
};

PromptBundle BuildFiltrationPrompt(std::string_view question,
                                   std::string_view identified_span,
                                   const AtfPrompts& prompts = AtfPrompts::Defaults(),
                                   const DecodingParams& decoding = {});

// No model call when the analysis found nothing. Throws Error(kParse) for a
// missing marker or empty p'.
FiltrationOutcome RunFiltration(std::string_view question,
                                const AnalysisOutcome& analysis,
                                Backend& backend,
                                const AtfPrompts& prompts = AtfPrompts::Defaults(),
                                const DecodingParams& decoding = {});

struct AtfOptions {
  MethodKind downstream = MethodKind::kCot;
  AtfPrompts prompts = AtfPrompts::Defaults();
  ReasoningOptions reasoning;
  // ATF-Shuffle: relocate distractors inside the analysis demos.
  std::optional<std::uint64_t> shuffle_seed;
};

struct AtfResult {
  std::optional<AnalysisOutcome> analysis;
  std::optional<FiltrationOutcome> filtration;
  std::string processed_question;
  bool filtration_failed = false;
  bool parse_error = false;
  std::optional<std::string> stage_error;
  std::vector<StageTrace> stages;  // every call, in order
  ReasoningResult downstream;
};

// Analysis, filtration, then the downstream method on p'. Stage failures
// fall back to the unfiltered question and are reported in the result.
// Throws Error(kInvalidArgument) for a non-reasoning downstream method.
AtfResult RunAtf(std::string_view question,
                 std::span<const AnalysisDemo> demos, const DemoSet& demoset,
                 Backend& backend, const AtfOptions& options = {});

}  // namespace irbench

#endif  // IRBENCH_ATF_H_
