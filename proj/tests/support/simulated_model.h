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

#ifndef IRBENCH_TESTS_SUPPORT_SIMULATED_MODEL_H_
#define IRBENCH_TESTS_SUPPORT_SIMULATED_MODEL_H_

#include <atomic>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "irbench/corpus.h"
#include "irbench/gateway.h"
#include "irbench/rational.h"

namespace irbench::testing {

struct SimulatedModelOptions {
  double clean_accuracy = 0.9;
  double distracted_accuracy = 0.55;
  double identify_rate = 0.75;
  double analysis_rate = 0.8;
  double analysis_other_rate = 0.03;
};

// A rule-based stand-in for a chat model. It knows the gold answer and
// distractor of every problem it was given and answers each prompt shape
// the library produces (reasoning, identification, ATF analysis and
// filtration, analysis-demo generation). Imperfection is decided by a hash
// of the prompt, so output is a pure function of the request.
class SimulatedModel : public Backend {
 public:
  explicit SimulatedModel(SimulatedModelOptions options = {});

  void Learn(const Corpus& corpus);
  void Learn(const std::string& question, const Rational& gold,
             std::optional<std::string> distractor = std::nullopt);

  Completion Complete(const PromptBundle& bundle) override;

  std::size_t calls() const { return calls_.load(); }

 private:
  struct Fact {
    Rational gold;
    std::optional<std::string> distractor;
  };
  struct Seen {
    const Fact* fact = nullptr;
    bool distracted = false;
  };

  Seen Lookup(std::string_view question) const;
  std::string Respond(const PromptBundle& bundle) const;

  SimulatedModelOptions options_;
  std::map<std::string, Fact> facts_;   // keyed by clean question
  std::map<std::string, Seen> index_;   // any known question text
  std::atomic<std::size_t> calls_{0};
};

// FNV-1a of text mapped to [0, 1).
double UnitHash(std::string_view text);

}  // namespace irbench::testing

#endif  // IRBENCH_TESTS_SUPPORT_SIMULATED_MODEL_H_
