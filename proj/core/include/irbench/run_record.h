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

#ifndef IRBENCH_RUN_RECORD_H_
#define IRBENCH_RUN_RECORD_H_

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "irbench/extraction.h"
#include "irbench/prompts.h"

namespace irbench {

enum class RunFlag {
  kFiltrationFailed,
  kParseError,
  kTruncated,
  kBackendError,
};

std::string_view RunFlagName(RunFlag flag);
RunFlag ParseRunFlag(std::string_view name);

// Per-problem trace of one method run.
struct RunRecord {
  std::string problem_id;
  MethodKind method = MethodKind::kCot;
  std::optional<MethodKind> downstream;  // ATF only
  std::vector<std::string> prompt_digests;
  std::vector<std::string> completions;
  ExtractedAnswer extracted;
  bool correct = false;
  std::optional<IdentificationVerdict> identification;
  std::set<RunFlag> flags;
  // ATF: the question handed to the downstream method.
  std::optional<std::string> processed_context;
  std::optional<std::string> error;

  bool has(RunFlag flag) const { return flags.count(flag) != 0; }

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

nlohmann::ordered_json RunRecordToJson(const RunRecord& record);
// Throws Error(kParse) on schema violations.
RunRecord RunRecordFromJson(const nlohmann::json& json);

// One compact JSON object per line, fields in a fixed order.
std::string SerializeResults(std::span<const RunRecord> records);
void WriteResults(std::span<const RunRecord> records,
                  const std::filesystem::path& path);
std::vector<RunRecord> LoadResults(const std::filesystem::path& path);

}  // namespace irbench

#endif  // IRBENCH_RUN_RECORD_H_
