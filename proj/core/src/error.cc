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

#include "irbench/error.h"

#include <string>
#include <utility>

namespace irbench {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kDuplicateId:
      return "duplicate_id";
    case ErrorCode::kOutOfRange:
      return "out_of_range";
    case ErrorCode::kCorruption:
      return "corruption";
    case ErrorCode::kGeneration:
      return "generation";
    case ErrorCode::kReplayMiss:
      return "replay_miss";
    case ErrorCode::kAuth:
      return "auth";
    case ErrorCode::kUnavailable:
      return "unavailable";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

LineError::LineError(ErrorCode code, std::size_t line, std::string field,
                     const std::string& message)
    : Error(code, "line " + std::to_string(line) +
                      (field.empty() ? std::string() : ", field '" + field + "'") +
                      ": " + message),
      line_(line),
      field_(std::move(field)) {}

ReplayMissError::ReplayMissError(std::string key, std::string prompt_prefix)
    : Error(ErrorCode::kReplayMiss,
            "replay cache miss for key " + key + " (prompt starts: \"" +
                prompt_prefix + "\")"),
      key_(std::move(key)),
      prompt_prefix_(std::move(prompt_prefix)) {}

}  // namespace irbench
