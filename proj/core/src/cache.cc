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

#include "irbench/cache.h"

#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "irbench/error.h"
#include "irbench/text.h"

namespace irbench {
namespace {

std::string UtcNow() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json CompletionJson(const Completion& c) {
  nlohmann::ordered_json j;
  j["text"] = c.text;
  j["finish_reason"] = FinishReasonName(c.finish_reason);
  j["prompt_tokens"] = c.prompt_tokens;
  j["completion_tokens"] = c.completion_tokens;
  return j;
}

Completion CompletionFromJson(const nlohmann::json& j) {
  Completion c;
  c.text = j.at("text").get<std::string>();
  c.finish_reason = ParseFinishReason(j.at("finish_reason").get<std::string>());
  c.prompt_tokens = j.value("prompt_tokens", std::int64_t{0});
  c.completion_tokens = j.value("completion_tokens", std::int64_t{0});
  return c;
}

// Cuts at most max_bytes without splitting a UTF-8 sequence.
std::string Utf8Prefix(std::string_view text, std::size_t max_bytes) {
  if (text.size() <= max_bytes) return std::string(text);
  std::size_t cut = max_bytes;
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) {
    --cut;
  }
  return std::string(text.substr(0, cut));
}

}  // namespace

CompletionCache::CompletionCache(std::filesystem::path path)
    : path_(std::move(path)) {
  std::ifstream in(*path_, std::ios::binary);
  if (!in) return;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      const auto row = nlohmann::json::parse(line);
      entries_.emplace(row.at("key").get<std::string>(),
                       CompletionFromJson(row.at("completion")));
    } catch (const nlohmann::json::exception& e) {
      throw LineError(ErrorCode::kParse, line_no, "", e.what());
    } catch (const Error& e) {
      throw LineError(ErrorCode::kParse, line_no, "completion", e.what());
    }
  }
}

std::optional<Completion> CompletionCache::Lookup(
    const std::string& key) const {
  std::shared_lock<std::shared_mutex> lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CompletionCache::Put(const PromptBundle& bundle,
                          const Completion& completion) {
  const std::string key = CacheKey(bundle);
  std::unique_lock<std::shared_mutex> lock(mutex_);
  if (!entries_.emplace(key, completion).second) return;
  if (!path_) return;
  nlohmann::ordered_json row;
  row["key"] = key;
  row["bundle_digest_fields"] = CanonicalBundleJson(bundle);
  row["completion"] = CompletionJson(completion);
  row["recorded_at"] = UtcNow();
  std::ofstream out(*path_, std::ios::binary | std::ios::app);
  out << row.dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "cannot append to " + path_->string());
}

std::size_t CompletionCache::size() const {
  std::shared_lock<std::shared_mutex> lock(mutex_);
  return entries_.size();
}

ReplayBackend::ReplayBackend(std::shared_ptr<CompletionCache> cache,
                             ReplayMode mode, Backend* upstream)
    : cache_(std::move(cache)), mode_(mode), upstream_(upstream) {
  if (!cache_) {
    throw Error(ErrorCode::kInvalidArgument, "replay backend needs a cache");
  }
  if (mode_ == ReplayMode::kRecord && upstream_ == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "record mode needs an upstream backend");
  }
}

Completion ReplayBackend::Complete(const PromptBundle& bundle) {
  const std::string key = CacheKey(bundle);
  if (auto hit = cache_->Lookup(key)) {
    hits_.fetch_add(1);
    return *hit;
  }
  misses_.fetch_add(1);
  if (mode_ == ReplayMode::kStrict) {
    throw ReplayMissError(key, Utf8Prefix(bundle.FirstUserText(), 80));
  }
  Completion fresh = upstream_->Complete(bundle);
  if (fresh.finish_reason == FinishReason::kError) return fresh;
  cache_->Put(bundle, fresh);
  // A concurrent caller may have recorded first; serve the stored copy.
  return cache_->Lookup(key).value_or(fresh);
}

CacheVerifyReport VerifyCacheFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  CacheVerifyReport report;
  std::map<std::string, std::pair<std::size_t, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    ++report.lines;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    try {
      const auto row = nlohmann::json::parse(line);
      const std::string key = row.at("key").get<std::string>();
      const Completion completion = CompletionFromJson(row.at("completion"));
      const std::string recomputed =
          CacheKey(BundleFromCanonicalJson(row.at("bundle_digest_fields")));
      if (recomputed != key) {
        ++report.key_mismatches;
        report.problems.push_back(where + "stored key " + key +
                                  " does not match recomputed " + recomputed);
        continue;
      }
      auto [it, inserted] =
          seen.emplace(key, std::make_pair(line_no, completion.text));
      if (!inserted) {
        ++report.duplicate_keys;
        if (it->second.second != completion.text) {
          ++report.conflicting;
          report.problems.push_back(
              where + "key " + key + " conflicts with line " +
              std::to_string(it->second.first));
        }
        continue;
      }
      ++report.valid;
    } catch (const std::exception& e) {
      ++report.key_mismatches;
      report.problems.push_back(where + "unreadable entry: " + e.what());
    }
  }
  return report;
}

}  // namespace irbench
