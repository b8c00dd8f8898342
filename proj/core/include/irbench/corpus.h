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

#ifndef IRBENCH_CORPUS_H_
#define IRBENCH_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irbench/problem.h"
#include "irbench/rational.h"

namespace irbench {

struct SentenceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;

  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

// Rule-based segmentation at '.', '?' and '!' followed by whitespace or end
// of text. Closing quotes and brackets stay with their sentence. A period
// after a known abbreviation ("Mr.", "Dr.", "a.m.", ...) is not a boundary.
// Whitespace between spans is not part of any span.
std::vector<SentenceSpan> SplitSentences(std::string_view question);

// Final answer from a GSM8K answer field: the text after the last "####"
// if present, with commas and currency symbols removed.
// Throws Error(kParse) carrying the raw field when no number is found.
Rational ParseGoldAnswer(std::string_view raw_answer_field);

enum class CorpusFormat { kGsm8k, kGsmir };

std::string_view CorpusFormatName(CorpusFormat format);
CorpusFormat ParseCorpusFormat(std::string_view name);

// One corpus row. For GSMIR rows, problem.question is the perturbed text and
// perturbed carries the original question and distractor metadata.
struct CorpusEntry {
  ProblemRecord problem;
  std::optional<PerturbedProblem> perturbed;

  const std::string& id() const { return problem.id; }
  const std::string& question() const { return problem.question; }

  friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

struct Corpus {
  std::string name;
  CorpusFormat format = CorpusFormat::kGsm8k;
  std::vector<CorpusEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

// JSONL readers. Throws LineError naming the line and field for malformed
// rows, and for duplicate ids (naming both lines).
Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format);
Corpus ReadCorpus(std::istream& in, CorpusFormat format,
                  std::string name = {});

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path);
void WriteCorpus(const Corpus& corpus, std::ostream& out);

// Builds a GSMIR row from a perturbed problem.
CorpusEntry MakeGsmirEntry(const PerturbedProblem& perturbed);

// The distractor-free counterpart of a GSMIR corpus (same ids, same order).
Corpus StripCorpus(const Corpus& gsmir);

}  // namespace irbench

#endif  // IRBENCH_CORPUS_H_
