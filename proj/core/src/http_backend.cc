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

#include "irbench/http_backend.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "irbench/error.h"

namespace irbench {
namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl SplitUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "endpoint must be an absolute URL: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool Retryable(int status) {
  return status == 408 || status == 409 || status == 429 || status >= 500;
}

nlohmann::json RequestBody(const PromptBundle& bundle) {
  nlohmann::json messages = nlohmann::json::array();
  for (const ChatMessage& m : bundle.messages) {
    messages.push_back(
        {{"role", ChatRoleName(m.role)}, {"content", m.content}});
  }
  nlohmann::json body = {{"model", bundle.decoding.model_name},
                         {"messages", std::move(messages)},
                         {"temperature", bundle.decoding.temperature},
                         {"max_tokens", bundle.decoding.max_tokens}};
  if (!bundle.decoding.stop_sequences.empty()) {
    body["stop"] = bundle.decoding.stop_sequences;
  }
  return body;
}

Completion ParseResponse(const std::string& body) {
  Completion c;
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& choice = j.at("choices").at(0);
    const auto& content = choice.at("message").at("content");
    c.text = content.is_null() ? std::string() : content.get<std::string>();
    const std::string reason =
        choice.contains("finish_reason") && choice["finish_reason"].is_string()
            ? choice["finish_reason"].get<std::string>()
            : "stop";
    c.finish_reason = reason == "length"  ? FinishReason::kLength
                      : reason == "stop" ? FinishReason::kStop
                                          : FinishReason::kError;
    if (j.contains("usage") && j["usage"].is_object()) {
      c.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t{0});
      c.completion_tokens =
          j["usage"].value("completion_tokens", std::int64_t{0});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("unexpected completion response: ") + e.what());
  }
  return c;
}

}  // namespace

std::chrono::milliseconds RetryPolicy::DelayFor(int attempt) const {
  const double scaled = static_cast<double>(initial_delay.count()) *
                        std::pow(multiplier, std::max(attempt, 0));
  const double capped = std::min(scaled, static_cast<double>(max_delay.count()));
  return std::chrono::milliseconds(static_cast<long long>(capped));
}

std::optional<HttpBackendConfig> HttpConfigFromEnv(std::string* model_name) {
  const char* endpoint = std::getenv("IRBENCH_ENDPOINT");
  if (endpoint == nullptr || *endpoint == '\0') return std::nullopt;
  HttpBackendConfig config;
  config.endpoint = endpoint;
  if (const char* key = std::getenv("IRBENCH_API_KEY")) config.api_key = key;
  if (model_name != nullptr) {
    if (const char* model = std::getenv("IRBENCH_MODEL"); model && *model) {
      *model_name = model;
    }
  }
  return config;
}

struct HttpBackend::Impl {
  HttpBackendConfig config;
  ParsedUrl url;
  Sleeper sleeper;
  std::atomic<std::size_t> requests{0};
};

HttpBackend::HttpBackend(HttpBackendConfig config, Sleeper sleeper)
    : impl_(std::make_unique<Impl>()) {
  impl_->url = SplitUrl(config.endpoint);
  impl_->config = std::move(config);
  impl_->sleeper = sleeper ? std::move(sleeper) : [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };
  if (impl_->config.retry.max_attempts < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_attempts must be >= 1");
  }
}

HttpBackend::~HttpBackend() = default;

std::size_t HttpBackend::requests_sent() const { return impl_->requests.load(); }

Completion HttpBackend::Complete(const PromptBundle& bundle) {
  const std::string body = RequestBody(bundle).dump();
  httplib::Headers headers;
  if (!impl_->config.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + impl_->config.api_key);
  }
  const RetryPolicy& retry = impl_->config.retry;
  std::string last_error;
  std::chrono::milliseconds server_hint{0};
  for (int attempt = 0; attempt < retry.max_attempts; ++attempt) {
    if (attempt > 0) {
      impl_->sleeper(std::max(retry.DelayFor(attempt - 1), server_hint));
      server_hint = std::chrono::milliseconds{0};
    }

    httplib::Client client(impl_->url.origin);
    client.set_connection_timeout(impl_->config.timeout);
    client.set_read_timeout(impl_->config.timeout);
    client.set_write_timeout(impl_->config.timeout);
    impl_->requests.fetch_add(1);
    auto res = client.Post(impl_->url.path, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return ParseResponse(res->body);
    const std::string detail = "HTTP " + std::to_string(res->status) + ": " +
                               res->body.substr(0, 200);
    if (res->status == 401 || res->status == 403) {
      throw Error(ErrorCode::kAuth, detail);
    }
    if (!Retryable(res->status)) {
      throw Error(ErrorCode::kInvalidArgument, detail);
    }
    last_error = detail;
    if (res->has_header("Retry-After")) {
      const long seconds = std::strtol(
          res->get_header_value("Retry-After").c_str(), nullptr, 10);
      if (seconds > 0) {
        server_hint = std::min<std::chrono::milliseconds>(
            std::chrono::seconds(seconds), retry.max_delay);
      }
    }
  }
  throw Error(ErrorCode::kUnavailable,
              "endpoint " + impl_->config.endpoint + " unavailable after " +
                  std::to_string(retry.max_attempts) +
                  " attempts: " + last_error);
}

}  // namespace irbench
