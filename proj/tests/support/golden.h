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


#ifndef IRBENCH_TESTS_SUPPORT_GOLDEN_H_
#define IRBENCH_TESTS_SUPPORT_GOLDEN_H_

#include <string>
#include <utility>
#include <vector>

#include "irbench/atf.h"
#include "irbench/gateway.h"
#include "irbench/prompts.h"

namespace irbench::testing {

// Frozen prompt texts under fixtures/golden/<name>.txt.
inline constexpr char kGoldenQuestion[] =
    "Rosa has 3 boxes of crayons with 24 crayons in each box. Rosa's teacher "
    "once owned 40 crayons. She gives 10 crayons to her sister. How many "
    "crayons does Rosa have left?";
inline constexpr char kGoldenDistractor[] = "Rosa's teacher once owned 40 crayons.";
inline constexpr std::uint64_t kGoldenShuffleSeed = 1;

// "=== role ===\n<content>\n" per message.
std::string SerializeBundle(const PromptBundle& bundle);

DemoSet GoldenDemos();
std::vector<AnalysisDemo> GoldenAnalysisDemos();

// (name, bundle) for every golden file, in a fixed order.
std::vector<std::pair<std::string, PromptBundle>> GoldenPrompts();

// Contents of fixtures/golden/<name>.txt ("" if missing).
std::string ReadGolden(const std::string& name);

}  // namespace irbench::testing

#endif  // IRBENCH_TESTS_SUPPORT_GOLDEN_H_
