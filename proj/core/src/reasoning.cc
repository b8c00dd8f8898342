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

#include "irbench/reasoning.h"

#include <string>

#include "irbench/error.h"

namespace irbench {
namespace {

class Tracer {
 public:
  Tracer(Backend& backend, ReasoningResult& result)
      : backend_(backend), result_(result) {}

  const std::string& Run(std::string stage, const PromptBundle& bundle) {
    Completion c = Complete(bundle, backend_);
    if (c.finish_reason == FinishReason::kLength) result_.truncated = true;
    result_.stages.push_back(
        {std::move(stage), CacheKey(bundle), std::move(c.text), c.finish_reason});
    return result_.stages.back().completion;
  }

 private:
  Backend& backend_;
  ReasoningResult& result_;
};

}  // namespace

ReasoningResult RunReasoning(MethodKind method, const DemoSet& demos,
                             std::string_view question, Backend& backend,
                             const ReasoningOptions& options) {
  ReasoningResult result;
  Tracer tracer(backend, result);
  const DecodingParams& decoding = options.decoding;
  switch (method) {
    case MethodKind::kSp:
      result.extracted = ExtractFinalAnswer(
          tracer.Run("sp", BuildSpPrompt(demos, question, decoding)));
      break;
    case MethodKind::kCot:
      result.extracted = ExtractFinalAnswer(
          tracer.Run("cot", BuildCotPrompt(demos, question, decoding)));
      break;
    case MethodKind::kIp:
      result.extracted = ExtractFinalAnswer(tracer.Run(
          "ip",
          BuildIpPrompt(demos, question, options.ip_instruction, decoding)));
      break;
    case MethodKind::kLtm:
      if (options.ltm_two_call) {
        const std::string decomposition = tracer.Run(
            "ltm_decompose", BuildLtmDecomposePrompt(demos, question, decoding));
        result.extracted = ExtractFinalAnswer(tracer.Run(
            "ltm_solve",
            BuildLtmSolvePrompt(demos, question, decomposition, decoding)));
      } else {
        result.extracted = ExtractFinalAnswer(
            tracer.Run("ltm", BuildLtmPrompt(demos, question, decoding)));
      }
      break;
    case MethodKind::kZeroCot: {
      const ZeroCotPrompts prompts = BuildZeroCotPrompts(question, decoding);
      const std::string reasoning = tracer.Run("0cot_reason", prompts.Stage1());
      const std::string& answer =
          tracer.Run("0cot_answer", prompts.Stage2(reasoning));
      result.extracted =
          ExtractFinalAnswer(std::string(kAnswerSentinel) + " " + answer);
      break;
    }
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(MethodLabel(method)) +
                      " is not a reasoning method");
  }
  return result;
}

}  // namespace irbench
