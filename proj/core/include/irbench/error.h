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

#ifndef IRBENCH_ERROR_H_
#define IRBENCH_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace irbench {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kDuplicateId,
  kOutOfRange,
  kCorruption,
  kGeneration,
  kReplayMiss,
  kAuth,
  kUnavailable,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure surfaced by the library is an irbench::Error; the code lets
// callers (batch runners in particular) decide whether to record and move on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Malformed input line in a JSONL file. line is 1-based.
class LineError : public Error {
 public:
  LineError(ErrorCode code, std::size_t line, std::string field,
            const std::string& message);

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class ReplayMissError : public Error {
 public:
  ReplayMissError(std::string key, std::string prompt_prefix);

  const std::string& key() const { return key_; }
  // First 80 characters of the first user message.
  const std::string& prompt_prefix() const { return prompt_prefix_; }

 private:
  std::string key_;
  std::string prompt_prefix_;
};

}  // namespace irbench

#endif  // IRBENCH_ERROR_H_
