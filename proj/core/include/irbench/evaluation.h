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

#ifndef IRBENCH_EVALUATION_H_
#define IRBENCH_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "irbench/atf.h"
#include "irbench/corpus.h"
#include "irbench/gateway.h"
#include "irbench/prompts.h"
#include "irbench/reasoning.h"
#include "irbench/run_record.h"

namespace irbench {

inline constexpr std::string_view kToolVersion = "irbench 0.1.0";

struct MethodConfig {
  MethodKind method = MethodKind::kCot;
  MethodKind downstream = MethodKind::kCot;  // ATF only
  DemoSet demos;
  std::vector<AnalysisDemo> atf_demos;
  std::optional<std::uint64_t> atf_shuffle_seed;
  // Identify-Shuffle-Ir-Prompt relocation seed.
  std::uint64_t identify_shuffle_seed = 0;
  ReasoningOptions reasoning;
  AtfPrompts atf_prompts = AtfPrompts::Defaults();
  double id_threshold = kDefaultIdThreshold;
};

// Every setting that influences results, for manifests and reports.
nlohmann::ordered_json ConfigEcho(const MethodConfig& config);

// Runs one problem. Item-level failures (replay misses, parse errors) are
// recorded in the returned record; Error(kUnavailable) and Error(kAuth)
// propagate because they mean the backend itself is gone.
RunRecord RunProblem(const CorpusEntry& entry, const MethodConfig& config,
                     Backend& backend);

struct EvaluationOptions {
  std::size_t max_in_flight = 4;
  // When set, results.jsonl and manifest.json are written here.
  std::optional<std::filesystem::path> out_dir;
  // Reuse records already present in out_dir/results.jsonl.
  bool resume = false;
  std::string corpus_digest;
  std::string cache_digest;
  nlohmann::ordered_json extra;  // merged into the manifest
};

inline constexpr std::string_view kResultsFileName = "results.jsonl";
inline constexpr std::string_view kManifestFileName = "manifest.json";

// One record per corpus entry, in corpus order. If the backend becomes
// unreachable the finished records are checkpointed (manifest status
// "incomplete") and Error(kUnavailable) is rethrown; a later call with
// resume=true picks up from there.
std::vector<RunRecord> RunEvaluation(const Corpus& corpus,
                                     const MethodConfig& config,
                                     Backend& backend,
                                     const EvaluationOptions& options = {});

// Hex SHA-256 of a file's bytes ("" if it does not exist).
std::string FileDigest(const std::filesystem::path& path);

}  // namespace irbench

#endif  // IRBENCH_EVALUATION_H_
