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

#ifndef IRBENCH_TESTS_SUPPORT_SYNTHETIC_H_
#define IRBENCH_TESTS_SUPPORT_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "irbench/corpus.h"
#include "irbench/problem.h"

namespace irbench::testing {

// Deterministic GSM8K-style problems with exact gold answers, one to four
// sentences each, drawn from a handful of story shapes.
std::vector<ProblemRecord> SyntheticProblems(std::size_t count,
                                             std::uint64_t seed);

// A GSM8K-format corpus of SyntheticProblems.
Corpus SyntheticCorpus(std::size_t count, std::uint64_t seed,
                       std::string name = "synthetic");

// A GSMIR corpus built from SyntheticProblems with the built-in templates.
// Problems whose perturbation fails are skipped.
Corpus SyntheticGsmir(std::size_t count, std::uint64_t seed,
                      std::string name = "synthetic-gsmir");

// Root of the checked-in fixture tree.
std::string FixturePath(const std::string& relative);

}  // namespace irbench::testing

#endif  // IRBENCH_TESTS_SUPPORT_SYNTHETIC_H_
