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

#ifndef IRBENCH_HTTP_BACKEND_H_
#define IRBENCH_HTTP_BACKEND_H_

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "irbench/gateway.h"

namespace irbench {

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_delay{500};
  std::chrono::milliseconds max_delay{8000};
  double multiplier = 2.0;

  // Delay before retry number attempt (0-based), capped at max_delay.
  std::chrono::milliseconds DelayFor(int attempt) const;
};

struct HttpBackendConfig {
  // Full URL of the chat-completions endpoint, e.g.
  // https://api.example.com/v1/chat/completions
  std::string endpoint;
  std::string api_key;
  RetryPolicy retry;
  std::chrono::seconds timeout{120};
};

// Reads IRBENCH_ENDPOINT, IRBENCH_API_KEY and IRBENCH_MODEL. Returns nullopt
// if the endpoint is unset. The model name, when present, is written to
// *model_name.
std::optional<HttpBackendConfig> HttpConfigFromEnv(
    std::string* model_name = nullptr);

// Live client for the chat-completions wire protocol: POSTs
// {"model", "messages": [{"role", "content"}], "temperature", "max_tokens",
// "stop"} and reads choices[0].message.content and finish_reason.
//
// Transport failures, HTTP 408/409/429 and 5xx are retried with exponential
// backoff; 401/403 fail immediately with Error(kAuth). Exhausted retries
// raise Error(kUnavailable).
class HttpBackend : public Backend {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit HttpBackend(HttpBackendConfig config, Sleeper sleeper = {});
  ~HttpBackend() override;

  Completion Complete(const PromptBundle& bundle) override;

  std::size_t requests_sent() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace irbench

#endif  // IRBENCH_HTTP_BACKEND_H_
