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

#include "irbench/gateway.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "irbench/text.h"

namespace irbench {

std::string_view ChatRoleName(ChatRole role) {
  switch (role) {
    case ChatRole::kSystem:
      return "system";
    case ChatRole::kUser:
      return "user";
    case ChatRole::kAssistant:
      return "assistant";
  }
  return "user";
}

ChatRole ParseChatRole(std::string_view name) {
  if (name == "system") return ChatRole::kSystem;
  if (name == "user") return ChatRole::kUser;
  if (name == "assistant") return ChatRole::kAssistant;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown chat role '" + std::string(name) + "'");
}

const std::string& PromptBundle::FirstUserText() const {
  static const std::string kEmpty;
  for (const ChatMessage& m : messages) {
    if (m.role == ChatRole::kUser) return m.content;
  }
  return kEmpty;
}

void ValidateBundle(const PromptBundle& bundle) {
  bool has_user = false;
  for (const ChatMessage& m : bundle.messages) {
    has_user |= m.role == ChatRole::kUser;
    if (m.role != ChatRole::kSystem && m.content.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "empty " + std::string(ChatRoleName(m.role)) + " message");
    }
  }
  if (!has_user) {
    throw Error(ErrorCode::kInvalidArgument, "bundle has no user message");
  }
  if (!(bundle.decoding.temperature >= 0.0 &&
        bundle.decoding.temperature <= 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be in [0, 2]");
  }
  if (bundle.decoding.max_tokens <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_tokens must be positive");
  }
}

nlohmann::json CanonicalBundleJson(const PromptBundle& bundle) {
  nlohmann::json messages = nlohmann::json::array();
  for (const ChatMessage& m : bundle.messages) {
    messages.push_back(
        {{"role", ChatRoleName(m.role)}, {"content", m.content}});
  }
  // nlohmann::json keeps object keys sorted.
  return {{"messages", std::move(messages)},
          {"model_name", bundle.decoding.model_name},
          {"temperature", bundle.decoding.temperature},
          {"max_tokens", bundle.decoding.max_tokens},
          {"stop_sequences", bundle.decoding.stop_sequences}};
}

PromptBundle BundleFromCanonicalJson(const nlohmann::json& json) {
  PromptBundle bundle;
  try {
    for (const auto& m : json.at("messages")) {
      bundle.messages.push_back(
          {ParseChatRole(m.at("role").get<std::string>()),
           m.at("content").get<std::string>()});
    }
    bundle.decoding.model_name = json.at("model_name").get<std::string>();
    bundle.decoding.temperature = json.at("temperature").get<double>();
    bundle.decoding.max_tokens = json.at("max_tokens").get<int>();
    bundle.decoding.stop_sequences =
        json.at("stop_sequences").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("malformed bundle fields: ") + e.what());
  }
  return bundle;
}

std::string CacheKey(const PromptBundle& bundle) {
  return Sha256Hex(CanonicalBundleJson(bundle).dump());
}

std::string_view FinishReasonName(FinishReason reason) {
  switch (reason) {
    case FinishReason::kStop:
      return "stop";
    case FinishReason::kLength:
      return "length";
    case FinishReason::kError:
      return "error";
  }
  return "error";
}

FinishReason ParseFinishReason(std::string_view name) {
  if (name == "stop") return FinishReason::kStop;
  if (name == "length") return FinishReason::kLength;
  if (name == "error") return FinishReason::kError;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown finish reason '" + std::string(name) + "'");
}

Completion Complete(const PromptBundle& bundle, Backend& backend) {
  ValidateBundle(bundle);
  return backend.Complete(bundle);
}

void BatchItem::Rethrow() const {
  if (error) std::rethrow_exception(error);
  throw Error(ErrorCode::kInvalidArgument, "batch item has no error");
}

std::string BatchItem::ErrorMessage() const {
  if (!error) return {};
  try {
    std::rethrow_exception(error);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

void ParallelFor(std::size_t count, std::size_t max_in_flight,
                 const std::function<void(std::size_t)>& fn) {
  if (max_in_flight == 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_in_flight must be >= 1");
  }
  if (count == 0) return;
  const std::size_t workers = std::min(count, max_in_flight);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(work);
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<BatchItem> CompleteBatch(std::span<const PromptBundle> bundles,
                                     Backend& backend,
                                     std::size_t max_in_flight) {
  if (max_in_flight == 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_in_flight must be >= 1");
  }
  std::vector<BatchItem> results(bundles.size());
  ParallelFor(bundles.size(), max_in_flight, [&](std::size_t i) {
    try {
      results[i].completion = Complete(bundles[i], backend);
    } catch (...) {
      results[i].error = std::current_exception();
    }
  });
  return results;
}

Completion ScriptedBackend::Complete(const PromptBundle& bundle) {
  calls_.fetch_add(1);
  return script_(bundle);
}

Completion NetworkForbiddenBackend::Complete(const PromptBundle&) {
  attempts_.fetch_add(1);
  throw Error(ErrorCode::kUnavailable,
              "network access is forbidden for this backend");
}

}  // namespace irbench
