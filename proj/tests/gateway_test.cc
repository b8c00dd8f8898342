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

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <string>
#include <vector>

#include "irbench/error.h"
#include "irbench/http_backend.h"
#include "irbench/text.h"
#include "stub_server.h"

namespace irbench {
namespace {

PromptBundle Bundle(std::string text) {
  PromptBundle b;
  b.messages.push_back({ChatRole::kUser, std::move(text)});
  return b;
}

TEST(CacheKey, CanonicalFormIsSortedAndVerbatim) {
  PromptBundle b = Bundle("Q: 2+2?\nA:");
  b.messages.insert(b.messages.begin(), {ChatRole::kSystem, "Be brief."});
  b.decoding.stop_sequences = {"\n\n"};
  const std::string expected =
      R"({"max_tokens":512,"messages":[{"content":"Be brief.","role":"system"},)"
      R"({"content":"Q: 2+2?\nA:","role":"user"}],"model_name":"gpt-3.5-turbo",)"
      R"("stop_sequences":["\n\n"],"temperature":0.0})";
  EXPECT_EQ(CanonicalBundleJson(b).dump(), expected);
  EXPECT_EQ(CacheKey(b), Sha256Hex(expected));
  EXPECT_EQ(BundleFromCanonicalJson(CanonicalBundleJson(b)), b);
}

TEST(CacheKey, SensitiveToEveryField) {
  const PromptBundle base = Bundle("hello");
  const std::string k = CacheKey(base);
  PromptBundle b = base;
  b.messages[0].content = "hello ";
  EXPECT_NE(CacheKey(b), k);
  b = base;
  b.decoding.temperature = 0.5;
  EXPECT_NE(CacheKey(b), k);
  b = base;
  b.decoding.max_tokens = 10;
  EXPECT_NE(CacheKey(b), k);
  b = base;
  b.decoding.model_name = "other";
  EXPECT_NE(CacheKey(b), k);
  b = base;
  b.decoding.stop_sequences = {"x"};
  EXPECT_NE(CacheKey(b), k);
  b = base;
  b.messages[0].role = ChatRole::kAssistant;
  EXPECT_NE(CacheKey(b), k);
  EXPECT_EQ(CacheKey(base), k);
}

TEST(Bundle, Validation) {
  EXPECT_NO_THROW(ValidateBundle(Bundle("x")));
  EXPECT_THROW(ValidateBundle(PromptBundle{}), Error);
  EXPECT_THROW(ValidateBundle(Bundle("")), Error);
  PromptBundle b = Bundle("x");
  b.decoding.temperature = 2.5;
  EXPECT_THROW(ValidateBundle(b), Error);
  b = Bundle("x");
  b.decoding.max_tokens = 0;
  EXPECT_THROW(ValidateBundle(b), Error);
}

TEST(Batch, KeepsOrderAndIsolatesFailures) {
  ScriptedBackend backend([](const PromptBundle& b) {
    if (b.FirstUserText() == "bad") throw Error(ErrorCode::kParse, "boom");
    return Completion{"echo " + b.FirstUserText()};
  });
  std::vector<PromptBundle> bundles;
  for (int i = 0; i < 40; ++i) bundles.push_back(Bundle(i == 7 ? "bad" : std::to_string(i)));
  const auto items = CompleteBatch(bundles, backend, 6);
  ASSERT_EQ(items.size(), 40u);
  for (int i = 0; i < 40; ++i) {
    if (i == 7) {
      EXPECT_FALSE(items[i].ok());
      EXPECT_NE(items[i].ErrorMessage().find("boom"), std::string::npos);
    } else {
      ASSERT_TRUE(items[i].ok());
      EXPECT_EQ(items[i].completion->text, "echo " + std::to_string(i));
    }
  }
  EXPECT_EQ(backend.calls(), 40u);
  EXPECT_THROW(CompleteBatch(bundles, backend, 0), Error);
}

TEST(Batch, RespectsConcurrencyLimit) {
  std::atomic<int> active{0}, peak{0};
  ScriptedBackend backend([&](const PromptBundle&) {
    const int now = ++active;
    int p = peak.load();
    while (now > p && !peak.compare_exchange_weak(p, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
    --active;
    return Completion{"ok"};
  });
  std::vector<PromptBundle> bundles(30, Bundle("x"));
  CompleteBatch(bundles, backend, 3);
  EXPECT_LE(peak.load(), 3);
}

TEST(Gateway, NetworkForbiddenBackendAlwaysFails) {
  NetworkForbiddenBackend backend;
  EXPECT_THROW(backend.Complete(Bundle("x")), Error);
  EXPECT_EQ(backend.attempts(), 1u);
}

TEST(Retry, DelaysGrowAndCap) {
  RetryPolicy p;
  EXPECT_EQ(p.DelayFor(0).count(), 500);
  EXPECT_EQ(p.DelayFor(1).count(), 1000);
  EXPECT_EQ(p.DelayFor(3).count(), 4000);
  EXPECT_EQ(p.DelayFor(10).count(), 8000);
}

class HttpBackendTest : public ::testing::Test {
 protected:
  HttpBackendConfig Config(const testing::StubServer& server) {
    HttpBackendConfig c;
    c.endpoint = server.endpoint();
    c.api_key = "secret";
    c.retry.max_attempts = 3;
    c.timeout = std::chrono::seconds(5);
    return c;
  }
  std::vector<std::chrono::milliseconds> sleeps_;
  HttpBackend::Sleeper Sleeper() {
    return [this](std::chrono::milliseconds d) { sleeps_.push_back(d); };
  }
};

TEST_F(HttpBackendTest, SendsWireRequestAndParsesReply) {
  nlohmann::json seen;
  testing::StubServer server([&](const nlohmann::json& body) {
    seen = body;
    return std::make_pair(200, testing::StubServer::Reply("The answer is 4.", "length"));
  });
  HttpBackend backend(Config(server), Sleeper());
  PromptBundle b = Bundle("Q: 2+2?\nA:");
  b.decoding.stop_sequences = {"\n\n"};
  const Completion c = backend.Complete(b);
  EXPECT_EQ(c.text, "The answer is 4.");
  EXPECT_EQ(c.finish_reason, FinishReason::kLength);
  EXPECT_EQ(c.prompt_tokens, 11);
  EXPECT_EQ(seen["model"], "gpt-3.5-turbo");
  EXPECT_EQ(seen["messages"][0]["role"], "user");
  EXPECT_EQ(seen["messages"][0]["content"], "Q: 2+2?\nA:");
  EXPECT_EQ(seen["max_tokens"], 512);
  EXPECT_EQ(seen["stop"][0], "\n\n");
  EXPECT_EQ(server.last_authorization(), "Bearer secret");
  EXPECT_TRUE(sleeps_.empty());
}

TEST_F(HttpBackendTest, RetriesRateLimitsWithServerHint) {
  std::atomic<int> calls{0};
  testing::StubServer server([&](const nlohmann::json&) {
    if (++calls < 3) return std::make_pair(429, std::string("{}"));
    return std::make_pair(200, testing::StubServer::Reply("ok"));
  });
  HttpBackend backend(Config(server), Sleeper());
  EXPECT_EQ(backend.Complete(Bundle("x")).text, "ok");
  EXPECT_EQ(backend.requests_sent(), 3u);
  ASSERT_EQ(sleeps_.size(), 2u);
  EXPECT_EQ(sleeps_[0].count(), 1000);  // Retry-After: 1 beats 500 ms
  EXPECT_EQ(sleeps_[1].count(), 1000);
}

TEST_F(HttpBackendTest, AuthFailureIsImmediate) {
  testing::StubServer server([](const nlohmann::json&) {
    return std::make_pair(401, std::string("{\"error\":\"bad key\"}"));
  });
  HttpBackend backend(Config(server), Sleeper());
  try {
    backend.Complete(Bundle("x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAuth);
  }
  EXPECT_EQ(server.requests(), 1);
}

TEST_F(HttpBackendTest, ExhaustedRetriesAreUnavailable) {
  testing::StubServer server([](const nlohmann::json&) {
    return std::make_pair(503, std::string("{}"));
  });
  HttpBackend backend(Config(server), Sleeper());
  try {
    backend.Complete(Bundle("x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnavailable);
  }
  EXPECT_EQ(server.requests(), 3);
  EXPECT_EQ(sleeps_.size(), 2u);
}

TEST_F(HttpBackendTest, ClientErrorsAreNotRetried) {
  testing::StubServer server([](const nlohmann::json&) {
    return std::make_pair(400, std::string("{}"));
  });
  HttpBackend backend(Config(server), Sleeper());
  EXPECT_THROW(backend.Complete(Bundle("x")), Error);
  EXPECT_EQ(server.requests(), 1);
}

TEST_F(HttpBackendTest, MalformedReplyIsAParseError) {
  testing::StubServer server([](const nlohmann::json&) {
    return std::make_pair(200, std::string("{\"choices\": []}"));
  });
  HttpBackend backend(Config(server), Sleeper());
  try {
    backend.Complete(Bundle("x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(HttpBackend, ConnectionRefusedIsUnavailable) {
  HttpBackendConfig c;
  c.endpoint = "http://127.0.0.1:1/v1/chat/completions";
  c.retry.max_attempts = 2;
  c.timeout = std::chrono::seconds(2);
  HttpBackend backend(c, [](std::chrono::milliseconds) {});
  try {
    backend.Complete(Bundle("x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnavailable);
  }
}

TEST(HttpBackend, RejectsRelativeEndpoint) {
  HttpBackendConfig c;
  c.endpoint = "localhost/v1";
  EXPECT_THROW(HttpBackend backend(c), Error);
}

}  // namespace
}  // namespace irbench
