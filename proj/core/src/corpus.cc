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

#include "irbench/corpus.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "irbench/error.h"
#include "irbench/perturb.h"
#include "irbench/text.h"

namespace irbench {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
bool IsAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

// Never end a sentence.
constexpr std::array<std::string_view, 9> kTitles = {
    "mr", "mrs", "ms", "dr", "prof", "st", "mt", "vs", "messrs"};
// End a sentence only when an uppercase letter follows.
constexpr std::array<std::string_view, 14> kWeakAbbreviations = {
    "a.m", "p.m", "e.g", "i.e", "etc", "jr", "sr", "inc", "ltd",
    "co", "corp", "approx", "u.s", "no"};

// Word (letters and inner periods) that ends right before text[pos].
std::string WordBefore(std::string_view text, std::size_t pos) {
  std::size_t b = pos;
  while (b > 0 && (IsAlpha(text[b - 1]) || text[b - 1] == '.')) --b;
  std::string word = ToLowerAscii(text.substr(b, pos - b));
  while (!word.empty() && word.front() == '.') word.erase(0, 1);
  return word;
}

// "u.k", "d.c": single letters joined by periods.
bool IsInitialism(std::string_view word) {
  if (word.size() < 3) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if ((i % 2 == 0) != IsAlpha(word[i])) return false;
    if (i % 2 == 1 && word[i] != '.') return false;
  }
  return word.size() % 2 == 1;
}

bool IsGuardedPeriod(std::string_view text, std::size_t period,
                     std::size_t after) {
  const std::string word = WordBefore(text, period);
  if (word.empty()) return false;
  if (std::find(kTitles.begin(), kTitles.end(), word) != kTitles.end()) {
    return true;
  }
  if (std::find(kWeakAbbreviations.begin(), kWeakAbbreviations.end(), word) !=
          kWeakAbbreviations.end() ||
      IsInitialism(word)) {
    std::size_t k = after;
    while (k < text.size() && IsSpace(text[k])) ++k;
    return !(k < text.size() && text[k] >= 'A' && text[k] <= 'Z');
  }
  return false;
}

// Length of a closing quote or bracket at text[i], 0 if none.
std::size_t CloserLength(std::string_view text, std::size_t i) {
  const char c = text[i];
  if (c == '"' || c == '\'' || c == ')' || c == ']' || c == '}') return 1;
  // U+2019 and U+201D in UTF-8.
  if (text.substr(i, 3) == "\xE2\x80\x99" ||
      text.substr(i, 3) == "\xE2\x80\x9D") {
    return 3;
  }
  return 0;
}

std::size_t SkipSpace(std::string_view text, std::size_t i) {
  while (i < text.size() && IsSpace(text[i])) ++i;
  return i;
}

std::string RequireString(const json& row, std::string_view field,
                          std::size_t line) {
  auto it = row.find(field);
  if (it == row.end()) {
    throw LineError(ErrorCode::kParse, line, std::string(field),
                    "missing field");
  }
  if (it->is_string()) return it->get<std::string>();
  if (field == "answer" && it->is_number()) return it->dump();
  throw LineError(ErrorCode::kParse, line, std::string(field),
                  "expected a string");
}

std::optional<std::string> RationaleOf(std::string_view raw_answer) {
  auto pos = raw_answer.rfind("####");
  if (pos == std::string_view::npos) return std::nullopt;
  auto rationale = Trim(raw_answer.substr(0, pos));
  if (rationale.empty()) return std::nullopt;
  return std::string(rationale);
}

ProblemRecord ParseProblem(const json& row, std::string_view question_field,
                           std::size_t line) {
  ProblemRecord record;
  record.id = RequireString(row, "id", line);
  if (Trim(record.id).empty()) {
    throw LineError(ErrorCode::kParse, line, "id", "empty id");
  }
  record.question = RequireString(row, question_field, line);
  if (Trim(record.question).empty()) {
    throw LineError(ErrorCode::kParse, line, std::string(question_field),
                    "empty question");
  }
  record.raw_answer = RequireString(row, "answer", line);
  try {
    record.gold_answer = ParseGoldAnswer(record.raw_answer);
  } catch (const Error& e) {
    throw LineError(ErrorCode::kParse, line, "answer", e.what());
  }
  record.gold_rationale = RationaleOf(record.raw_answer);
  if (auto it = row.find("source_tag"); it != row.end() && it->is_string()) {
    const auto tag = it->get<std::string>();
    if (tag == "clean") {
      record.source_tag = SourceTag::kClean;
    } else if (tag == "gsmic_style") {
      record.source_tag = SourceTag::kGsmicStyle;
    } else if (tag == "other") {
      record.source_tag = SourceTag::kOther;
    } else {
      throw LineError(ErrorCode::kParse, line, "source_tag",
                      "unknown tag '" + tag + "'");
    }
  }
  return record;
}

std::string AnswerField(const ProblemRecord& record) {
  if (!record.raw_answer.empty()) return record.raw_answer;
  const std::string value = FormatRational(record.gold_answer);
  if (record.gold_rationale) return *record.gold_rationale + "\n#### " + value;
  return value;
}

CorpusEntry ParseGsmirRow(const json& row, std::size_t line) {
  ProblemRecord base = ParseProblem(row, "original_question", line);
  const SourceTag row_tag =
      row.contains("source_tag") ? base.source_tag : SourceTag::kGsmicStyle;
  base.source_tag = SourceTag::kClean;

  PerturbedProblem perturbed;
  perturbed.question = RequireString(row, "question", line);
  perturbed.distractor_sentence = RequireString(row, "distractor", line);
  auto idx = row.find("insertion_index");
  if (idx == row.end() || !idx->is_number_integer() ||
      idx->get<long long>() < 0) {
    throw LineError(ErrorCode::kParse, line, "insertion_index",
                    "expected a non-negative integer");
  }
  perturbed.insertion_index = idx->get<std::size_t>();
  try {
    perturbed.template_kind =
        ParseTemplateKind(RequireString(row, "template_kind", line));
  } catch (const LineError&) {
    throw;
  } catch (const Error& e) {
    throw LineError(ErrorCode::kParse, line, "template_kind", e.what());
  }
  if (auto it = row.find("role_used"); it != row.end() && it->is_string()) {
    perturbed.role_used = it->get<std::string>();
  }
  perturbed.base = base;
  try {
    StripDistractor(perturbed);
  } catch (const Error& e) {
    throw LineError(ErrorCode::kCorruption, line, "question", e.what());
  }

  CorpusEntry entry;
  entry.problem = base;
  entry.problem.question = perturbed.question;
  entry.problem.source_tag = row_tag;
  entry.perturbed = std::move(perturbed);
  return entry;
}

}  // namespace

std::vector<SentenceSpan> SplitSentences(std::string_view question) {
  std::vector<SentenceSpan> spans;
  const std::size_t n = question.size();
  std::size_t start = SkipSpace(question, 0);
  std::size_t i = start;
  auto emit = [&](std::size_t end) {
    spans.push_back(
        {start, end, std::string(question.substr(start, end - start))});
  };
  while (i < n) {
    const char c = question[i];
    if (c != '.' && c != '?' && c != '!') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && (question[j] == '.' || question[j] == '?' ||
                     question[j] == '!')) {
      ++j;
    }
    while (j < n) {
      const std::size_t len = CloserLength(question, j);
      if (len == 0) break;
      j += len;
    }
    const bool at_boundary = j == n || IsSpace(question[j]);
    if (at_boundary &&
        !(c == '.' && j == i + 1 && IsGuardedPeriod(question, i, j))) {
      emit(j);
      start = SkipSpace(question, j);
      i = start;
      continue;
    }
    i = j;
  }
  if (start < n) {
    std::size_t end = n;
    while (end > start && IsSpace(question[end - 1])) --end;
    if (end > start) emit(end);
  }
  return spans;
}

Rational ParseGoldAnswer(std::string_view raw_answer_field) {
  std::string_view tail = raw_answer_field;
  if (auto pos = tail.rfind("####"); pos != std::string_view::npos) {
    tail = tail.substr(pos + 4);
  }
  std::string cleaned;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const char c = tail[i];
    if (c == ',' || c == '$') continue;
    // Pound and euro signs in UTF-8.
    if (tail.substr(i, 2) == "\xC2\xA3") {
      ++i;
      continue;
    }
    if (tail.substr(i, 3) == "\xE2\x82\xAC") {
      i += 2;
      continue;
    }
    cleaned.push_back(c);
  }
  std::string_view value = Trim(cleaned);
  if (!value.empty() && value.back() == '.') value.remove_suffix(1);
  if (auto parsed = ParseNumber(value)) return *parsed;
  throw Error(ErrorCode::kParse, "no parseable number in answer field \"" +
                                     std::string(raw_answer_field) + "\"");
}

std::string_view CorpusFormatName(CorpusFormat format) {
  return format == CorpusFormat::kGsm8k ? "gsm8k" : "gsmir";
}

CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "gsm8k" || name == "jsonl_gsm8k") return CorpusFormat::kGsm8k;
  if (name == "gsmir" || name == "jsonl_gsmir") return CorpusFormat::kGsmir;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown corpus format '" + std::string(name) + "'");
}

Corpus ReadCorpus(std::istream& in, CorpusFormat format, std::string name) {
  Corpus corpus;
  corpus.name = std::move(name);
  corpus.format = format;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw LineError(ErrorCode::kParse, line_no, "", e.what());
    }
    if (!row.is_object()) {
      throw LineError(ErrorCode::kParse, line_no, "", "expected an object");
    }
    CorpusEntry entry;
    if (format == CorpusFormat::kGsm8k) {
      entry.problem = ParseProblem(row, "question", line_no);
    } else {
      entry = ParseGsmirRow(row, line_no);
    }
    auto [it, inserted] = seen.emplace(entry.id(), line_no);
    if (!inserted) {
      throw LineError(ErrorCode::kDuplicateId, line_no, "id",
                      "duplicate id '" + entry.id() + "' (first seen on line " +
                          std::to_string(it->second) + ")");
    }
    corpus.entries.push_back(std::move(entry));
  }
  return corpus;
}

Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open corpus " + path.string());
  }
  return ReadCorpus(in, format, path.stem().string());
}

void WriteCorpus(const Corpus& corpus, std::ostream& out) {
  for (const CorpusEntry& entry : corpus.entries) {
    ordered_json row;
    if (corpus.format == CorpusFormat::kGsm8k || !entry.perturbed) {
      row["id"] = entry.problem.id;
      row["question"] = entry.problem.question;
      row["answer"] = AnswerField(entry.problem);
      if (entry.problem.source_tag != SourceTag::kClean) {
        row["source_tag"] = SourceTagName(entry.problem.source_tag);
      }
    } else {
      const PerturbedProblem& p = *entry.perturbed;
      row["id"] = p.base.id;
      row["original_question"] = p.base.question;
      row["question"] = p.question;
      row["distractor"] = p.distractor_sentence;
      row["insertion_index"] = p.insertion_index;
      row["template_kind"] = TemplateKindName(p.template_kind);
      row["answer"] = AnswerField(p.base);
      if (!p.role_used.empty()) row["role_used"] = p.role_used;
      if (entry.problem.source_tag != SourceTag::kGsmicStyle) {
        row["source_tag"] = SourceTagName(entry.problem.source_tag);
      }
    }
    out << row.dump() << '\n';
  }
}

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  WriteCorpus(corpus, out);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

CorpusEntry MakeGsmirEntry(const PerturbedProblem& perturbed) {
  CorpusEntry entry;
  entry.problem = perturbed.base;
  entry.problem.question = perturbed.question;
  entry.problem.source_tag = SourceTag::kGsmicStyle;
  entry.perturbed = perturbed;
  return entry;
}

Corpus StripCorpus(const Corpus& gsmir) {
  Corpus out;
  out.name = gsmir.name + "-slc";
  out.format = CorpusFormat::kGsm8k;
  out.entries.reserve(gsmir.entries.size());
  for (const CorpusEntry& entry : gsmir.entries) {
    CorpusEntry clean;
    clean.problem =
        entry.perturbed ? StripDistractor(*entry.perturbed) : entry.problem;
    out.entries.push_back(std::move(clean));
  }
  return out;
}

std::string_view SourceTagName(SourceTag tag) {
  switch (tag) {
    case SourceTag::kClean:
      return "clean";
    case SourceTag::kGsmicStyle:
      return "gsmic_style";
    case SourceTag::kOther:
      return "other";
  }
  return "other";
}

std::string_view TemplateKindName(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::kNumericRatio:
      return "numeric_ratio";
    case TemplateKind::kNumericInteger:
      return "numeric_integer";
    case TemplateKind::kNumericPercentage:
      return "numeric_percentage";
    case TemplateKind::kOpinion:
      return "opinion";
  }
  return "opinion";
}

TemplateKind ParseTemplateKind(std::string_view name) {
  for (TemplateKind kind : kAllTemplateKinds) {
    if (TemplateKindName(kind) == name) return kind;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown template kind '" + std::string(name) + "'");
}

}  // namespace irbench
