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

#ifndef IRBENCH_RNG_H_
#define IRBENCH_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace irbench {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; bounded sampling is done here rather
// than through std::uniform_int_distribution so that results do not depend
// on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t Below(std::uint64_t bound);

  // Uniform in [lo, hi].
  std::int64_t Between(std::int64_t lo, std::int64_t hi);

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent seed for sub-stream index from a base seed.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t index);

}  // namespace irbench

#endif  // IRBENCH_RNG_H_
