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

#ifndef IRBENCH_REASONING_H_
#define IRBENCH_REASONING_H_

#include <string>
#include <string_view>
#include <vector>

#include "irbench/extraction.h"
#include "irbench/gateway.h"
#include "irbench/prompts.h"

namespace irbench {

struct ReasoningOptions {
  DecodingParams decoding;
  std::string ip_instruction{kDefaultIpInstruction};
  // Least-to-most as separate decompose and solve calls.
  bool ltm_two_call = false;
};

// One model call inside a pipeline.
struct StageTrace {
  std::string stage;
  std::string prompt_digest;
  std::string completion;
  FinishReason finish_reason = FinishReason::kStop;
};

struct ReasoningResult {
  std::vector<StageTrace> stages;
  ExtractedAnswer extracted;
  bool truncated = false;
};

// Builds the prompt(s) for a reasoning method (SP, COT, 0-COT, LTM, IP),
// runs them and extracts the final answer. Backend errors propagate.
ReasoningResult RunReasoning(MethodKind method, const DemoSet& demos,
                             std::string_view question, Backend& backend,
                             const ReasoningOptions& options = {});

}  // namespace irbench

#endif  // IRBENCH_REASONING_H_
