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


#ifndef IRBENCH_TESTS_SUPPORT_REPLAY_FIXTURE_H_
#define IRBENCH_TESTS_SUPPORT_REPLAY_FIXTURE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "irbench/evaluation.h"

namespace irbench::testing {

// The frozen replay fixture under fixtures/replay: a 50-problem GSMIR
// corpus, its distractor-free pair and a completion cache covering the
// runs in ReplayMethods(), all recorded from SimulatedModel.
inline constexpr std::size_t kReplayProblems = 50;
inline constexpr std::uint64_t kReplayCorpusSeed = 50;
inline constexpr std::uint64_t kReplayDemoSeed = 0;

std::string ReplayCorpusPath();  // GSMIR
std::string ReplaySlcPath();     // GSM8K format
std::string ReplayCachePath();

// Matches what `irbench run --seed 0 --demos <baseline> --atf-demos <atf>`
// builds for the same method.
MethodConfig ReplayConfig(MethodKind method, MethodKind downstream = MethodKind::kCot);

struct ReplayRun {
  MethodKind method;
  bool on_slc;
};

// ATF+COT, COT and Identify-Ir on GSMIR, COT on the clean pair.
std::vector<ReplayRun> ReplayMethods();

}  // namespace irbench::testing

#endif  // IRBENCH_TESTS_SUPPORT_REPLAY_FIXTURE_H_
