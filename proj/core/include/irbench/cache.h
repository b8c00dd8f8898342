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

#ifndef IRBENCH_CACHE_H_
#define IRBENCH_CACHE_H_

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "irbench/gateway.h"

namespace irbench {

struct CacheEntry {
  std::string key;
  PromptBundle bundle;
  Completion completion;
  std::string recorded_at;  // ISO-8601 UTC
};

// Append-only JSONL completion cache:
//   {"key": hex, "bundle_digest_fields": {...}, "completion": {...},
//    "recorded_at": str}
// Reads are concurrent; appends are serialized and flushed per line.
class CompletionCache {
 public:
  // In-memory only.
  CompletionCache() = default;
  // Loads path if it exists; later appends go to the same file.
  explicit CompletionCache(std::filesystem::path path);

  std::optional<Completion> Lookup(const std::string& key) const;

  // First write wins; a second Put for a known key is ignored.
  void Put(const PromptBundle& bundle, const Completion& completion);

  std::size_t size() const;
  const std::optional<std::filesystem::path>& path() const { return path_; }

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, Completion> entries_;
};

enum class ReplayMode {
  kStrict,  // a miss is an error
  kRecord,  // a miss goes upstream and is appended to the cache
};

// Serves completions from a CompletionCache. In strict mode it never
// touches the upstream backend.
class ReplayBackend : public Backend {
 public:
  ReplayBackend(std::shared_ptr<CompletionCache> cache, ReplayMode mode,
                Backend* upstream = nullptr);

  Completion Complete(const PromptBundle& bundle) override;

  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }

 private:
  std::shared_ptr<CompletionCache> cache_;
  ReplayMode mode_;
  Backend* upstream_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

struct CacheVerifyReport {
  std::size_t lines = 0;
  std::size_t valid = 0;
  std::size_t key_mismatches = 0;   // stored key != recomputed key
  std::size_t duplicate_keys = 0;   // same key recorded again
  std::size_t conflicting = 0;      // duplicates whose completion differs
  std::vector<std::string> problems;  // human-readable, one per issue

  bool ok() const { return key_mismatches == 0 && conflicting == 0; }
};

// Recomputes every key from its stored bundle fields.
CacheVerifyReport VerifyCacheFile(const std::filesystem::path& path);

}  // namespace irbench

#endif  // IRBENCH_CACHE_H_
