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

#ifndef IRBENCH_GATEWAY_H_
#define IRBENCH_GATEWAY_H_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "irbench/error.h"

namespace irbench {

enum class ChatRole { kSystem, kUser, kAssistant };

std::string_view ChatRoleName(ChatRole role);
ChatRole ParseChatRole(std::string_view name);

struct ChatMessage {
  ChatRole role = ChatRole::kUser;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct DecodingParams {
  std::string model_name = "gpt-3.5-turbo";
  double temperature = 0.0;
  int max_tokens = 512;
  std::vector<std::string> stop_sequences;

  friend bool operator==(const DecodingParams&,
                         const DecodingParams&) = default;
};

struct PromptBundle {
  std::vector<ChatMessage> messages;
  DecodingParams decoding;

  // Text of the first user message ("" if none).
  const std::string& FirstUserText() const;

  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

// Throws Error(kInvalidArgument): needs a user message, non-empty
// user/assistant content, 0 <= temperature <= 2, max_tokens > 0.
void ValidateBundle(const PromptBundle& bundle);

// Sorted-key JSON of every bundle field; content is kept verbatim.
nlohmann::json CanonicalBundleJson(const PromptBundle& bundle);
PromptBundle BundleFromCanonicalJson(const nlohmann::json& json);

// Hex SHA-256 of the canonical serialization.
std::string CacheKey(const PromptBundle& bundle);

enum class FinishReason { kStop, kLength, kError };

std::string_view FinishReasonName(FinishReason reason);
FinishReason ParseFinishReason(std::string_view name);

struct Completion {
  std::string text;
  FinishReason finish_reason = FinishReason::kStop;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  friend bool operator==(const Completion&, const Completion&) = default;
};

// A chat-completion backend. Implementations must be safe to call from
// several threads at once.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual Completion Complete(const PromptBundle& bundle) = 0;
};

// Forwards to the backend after validating the bundle.
Completion Complete(const PromptBundle& bundle, Backend& backend);

// Outcome of one batch item: exactly one of completion / error is set.
struct BatchItem {
  std::optional<Completion> completion;
  std::exception_ptr error;

  bool ok() const { return completion.has_value(); }
  // Rethrows the stored error; use inside a try block.
  [[noreturn]] void Rethrow() const;
  std::string ErrorMessage() const;
};

// Runs fn(0..count-1) on at most max_in_flight threads. The first exception
// thrown by fn stops further work and is rethrown once all threads join.
void ParallelFor(std::size_t count, std::size_t max_in_flight,
                 const std::function<void(std::size_t)>& fn);

// output[i] belongs to bundles[i]; item failures are stored in place.
// Throws Error(kInvalidArgument) if max_in_flight is 0.
std::vector<BatchItem> CompleteBatch(std::span<const PromptBundle> bundles,
                                     Backend& backend,
                                     std::size_t max_in_flight);

// Backend driven by a function; counts calls. Intended for tests and
// scripted oracles.
class ScriptedBackend : public Backend {
 public:
  using Script = std::function<Completion(const PromptBundle&)>;

  explicit ScriptedBackend(Script script) : script_(std::move(script)) {}

  Completion Complete(const PromptBundle& bundle) override;

  std::size_t calls() const { return calls_.load(); }

 private:
  Script script_;
  std::atomic<std::size_t> calls_{0};
};

// Any call is a failure; stands in for the network in replay-only runs.
class NetworkForbiddenBackend : public Backend {
 public:
  Completion Complete(const PromptBundle& bundle) override;

  std::size_t attempts() const { return attempts_.load(); }

 private:
  std::atomic<std::size_t> attempts_{0};
};

}  // namespace irbench

#endif  // IRBENCH_GATEWAY_H_
