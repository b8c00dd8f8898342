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

#include "irbench/run_record.h"

#include <fstream>
#include <sstream>
#include <string>

#include "irbench/error.h"
#include "irbench/text.h"

namespace irbench {

std::string_view RunFlagName(RunFlag flag) {
  switch (flag) {
    case RunFlag::kFiltrationFailed:
      return "filtration_failed";
    case RunFlag::kParseError:
      return "parse_error";
    case RunFlag::kTruncated:
      return "truncated";
    case RunFlag::kBackendError:
      return "backend_error";
  }
  return "backend_error";
}

RunFlag ParseRunFlag(std::string_view name) {
  for (RunFlag f : {RunFlag::kFiltrationFailed, RunFlag::kParseError,
                    RunFlag::kTruncated, RunFlag::kBackendError}) {
    if (RunFlagName(f) == name) return f;
  }
  throw Error(ErrorCode::kParse, "unknown run flag '" + std::string(name) + "'");
}

nlohmann::ordered_json RunRecordToJson(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["problem_id"] = r.problem_id;
  j["method"] = MethodFlagName(r.method);
  j["downstream"] = r.downstream ? nlohmann::ordered_json(MethodFlagName(*r.downstream))
                                 : nlohmann::ordered_json(nullptr);
  j["prompts"] = r.prompt_digests;
  j["completions"] = r.completions;
  nlohmann::ordered_json extracted;
  extracted["value"] = r.extracted.value
                           ? nlohmann::ordered_json(FormatRational(*r.extracted.value))
                           : nlohmann::ordered_json(nullptr);
  extracted["method"] = ExtractionMethodName(r.extracted.method);
  extracted["raw_tail"] = r.extracted.raw_tail;
  j["extracted"] = std::move(extracted);
  j["correct"] = r.correct;
  if (r.identification) {
    nlohmann::ordered_json v;
    v["category"] = RecognitionCategoryName(r.identification->category);
    v["matched_score"] = r.identification->matched_score;
    v["claimed_span"] =
        r.identification->claimed_span
            ? nlohmann::ordered_json(*r.identification->claimed_span)
            : nlohmann::ordered_json(nullptr);
    j["identification"] = std::move(v);
  } else {
    j["identification"] = nullptr;
  }
  nlohmann::ordered_json flags = nlohmann::ordered_json::array();
  for (RunFlag f : r.flags) flags.push_back(RunFlagName(f));
  j["flags"] = std::move(flags);
  j["processed_context"] = r.processed_context
                               ? nlohmann::ordered_json(*r.processed_context)
                               : nlohmann::ordered_json(nullptr);
  j["error"] = r.error ? nlohmann::ordered_json(*r.error)
                       : nlohmann::ordered_json(nullptr);
  return j;
}

RunRecord RunRecordFromJson(const nlohmann::json& j) {
  RunRecord r;
  try {
    r.problem_id = j.at("problem_id").get<std::string>();
    r.method = ParseMethodKind(j.at("method").get<std::string>());
    if (!j.at("downstream").is_null()) {
      r.downstream = ParseMethodKind(j.at("downstream").get<std::string>());
    }
    r.prompt_digests = j.at("prompts").get<std::vector<std::string>>();
    r.completions = j.at("completions").get<std::vector<std::string>>();
    const auto& e = j.at("extracted");
    if (!e.at("value").is_null()) {
      auto value = ParseNumber(e.at("value").get<std::string>());
      if (!value) throw Error(ErrorCode::kParse, "bad extracted value");
      r.extracted.value = *value;
    }
    r.extracted.method =
        ParseExtractionMethod(e.at("method").get<std::string>());
    r.extracted.raw_tail = e.at("raw_tail").get<std::string>();
    r.correct = j.at("correct").get<bool>();
    if (!j.at("identification").is_null()) {
      const auto& v = j.at("identification");
      IdentificationVerdict verdict;
      verdict.category =
          ParseRecognitionCategory(v.at("category").get<std::string>());
      verdict.matched_score = v.at("matched_score").get<double>();
      if (!v.at("claimed_span").is_null()) {
        verdict.claimed_span = v.at("claimed_span").get<std::string>();
      }
      r.identification = std::move(verdict);
    }
    for (const auto& f : j.at("flags")) {
      r.flags.insert(ParseRunFlag(f.get<std::string>()));
    }
    if (j.contains("processed_context") && !j["processed_context"].is_null()) {
      r.processed_context = j["processed_context"].get<std::string>();
    }
    if (j.contains("error") && !j["error"].is_null()) {
      r.error = j["error"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed run record: ") +
                                       e.what());
  }
  return r;
}

std::string SerializeResults(std::span<const RunRecord> records) {
  std::string out;
  for (const RunRecord& r : records) {
    out += RunRecordToJson(r).dump();
    out += '\n';
  }
  return out;
}

void WriteResults(std::span<const RunRecord> records,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << SerializeResults(records);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::vector<RunRecord> LoadResults(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<RunRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      records.push_back(RunRecordFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw LineError(ErrorCode::kParse, line_no, "", e.what());
    } catch (const Error& e) {
      throw LineError(ErrorCode::kParse, line_no, "", e.what());
    }
  }
  return records;
}

}  // namespace irbench
