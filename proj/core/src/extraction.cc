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

#include "irbench/extraction.h"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "irbench/error.h"
#include "irbench/text.h"

namespace irbench {
namespace {

constexpr std::string_view kSentinel = "the answer is";
constexpr std::size_t kTailBytes = 80;

std::string Utf8Head(std::string_view text, std::size_t max_bytes) {
  if (text.size() <= max_bytes) return std::string(text);
  std::size_t cut = max_bytes;
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) {
    --cut;
  }
  return std::string(text.substr(0, cut));
}

std::vector<std::string> SplitSpaces(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string token; in >> token;) out.push_back(std::move(token));
  return out;
}

std::string_view StripPrefix(std::string_view text, std::string_view prefix) {
  return StartsWith(text, prefix) ? text.substr(prefix.size()) : text;
}

}  // namespace

std::string_view ExtractionMethodName(ExtractionMethod method) {
  switch (method) {
    case ExtractionMethod::kSentinel:
      return "sentinel";
    case ExtractionMethod::kLastNumber:
      return "last_number";
    case ExtractionMethod::kNone:
      return "none";
  }
  return "none";
}

ExtractionMethod ParseExtractionMethod(std::string_view name) {
  if (name == "sentinel") return ExtractionMethod::kSentinel;
  if (name == "last_number") return ExtractionMethod::kLastNumber;
  if (name == "none") return ExtractionMethod::kNone;
  throw Error(ErrorCode::kParse,
              "unknown extraction method '" + std::string(name) + "'");
}

ExtractedAnswer ExtractFinalAnswer(std::string_view completion) {
  ExtractedAnswer out;
  try {
    if (auto pos = RFindCaseInsensitive(completion, kSentinel);
        pos != std::string_view::npos) {
      const std::string_view tail = completion.substr(pos + kSentinel.size());
      const auto tokens = ScanNumbers(tail);
      if (!tokens.empty()) {
        out.value = tokens.front().value;
        out.method = ExtractionMethod::kSentinel;
        out.raw_tail = Utf8Head(completion.substr(pos), kTailBytes);
        return out;
      }
    }
    const auto tokens = ScanNumbers(completion);
    if (!tokens.empty()) {
      out.value = tokens.back().value;
      out.method = ExtractionMethod::kLastNumber;
      out.raw_tail = Utf8Head(completion.substr(tokens.back().begin), kTailBytes);
      return out;
    }
  } catch (...) {
    out = ExtractedAnswer{};
  }
  std::string_view tail = completion;
  if (tail.size() > kTailBytes) tail = tail.substr(tail.size() - kTailBytes);
  while (!tail.empty() &&
         (static_cast<unsigned char>(tail.front()) & 0xC0) == 0x80) {
    tail.remove_prefix(1);
  }
  out.raw_tail = std::string(tail);
  return out;
}

bool ScoreAnswer(const ExtractedAnswer& extracted, const Rational& gold) {
  return extracted.value.has_value() && *extracted.value == gold;
}

std::string_view RecognitionCategoryName(RecognitionCategory category) {
  switch (category) {
    case RecognitionCategory::kIrrelevantCorrect:
      return "irrelevant_correct";
    case RecognitionCategory::kOtherInformation:
      return "other_information";
    case RecognitionCategory::kNoIrrelevant:
      return "no_irrelevant";
  }
  return "no_irrelevant";
}

RecognitionCategory ParseRecognitionCategory(std::string_view name) {
  if (name == "irrelevant_correct") return RecognitionCategory::kIrrelevantCorrect;
  if (name == "other_information") return RecognitionCategory::kOtherInformation;
  if (name == "no_irrelevant") return RecognitionCategory::kNoIrrelevant;
  throw Error(ErrorCode::kParse,
              "unknown recognition category '" + std::string(name) + "'");
}

std::string NormalizeForMatch(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (c >= 'A' && c <= 'Z') {
      out.push_back(char(c - 'A' + 'a'));
    } else if (u >= 0x80 || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      out.push_back(c);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
               c == '\v') {
      out.push_back(' ');
    }
    // Everything else is ASCII punctuation or a control byte: dropped.
  }
  return CollapseWhitespace(out);
}

double TokenF1(std::string_view a, std::string_view b) {
  const auto ta = SplitSpaces(NormalizeForMatch(a));
  const auto tb = SplitSpaces(NormalizeForMatch(b));
  if (ta.empty() && tb.empty()) return 1.0;
  if (ta.empty() || tb.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : tb) ++counts[t];
  std::size_t common = 0;
  for (const auto& t : ta) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = double(common) / double(ta.size());
  const double recall = double(common) / double(tb.size());
  return 2.0 * precision * recall / (precision + recall);
}

bool IsNoIrrelevantClaim(std::string_view text) {
  static const std::array<std::string_view, 16> kFiller = {
      "exists", "exist",    "in",    "the",   "question", "problem",
      "here",   "provided", "given", "this",  "is",       "present",
      "found",  "description", "statement", "above"};
  const std::string normalized = NormalizeForMatch(text);
  std::string_view rest = normalized;
  rest = StripPrefix(rest, "the answer is ");
  for (std::string_view lead : {"there is ", "there are ", "there exists "}) {
    rest = StripPrefix(rest, lead);
  }
  constexpr std::string_view kPhrase = "no irrelevant information";
  if (!StartsWith(rest, kPhrase)) return false;
  rest.remove_prefix(kPhrase.size());
  for (const auto& token : SplitSpaces(std::string(rest))) {
    if (std::find(kFiller.begin(), kFiller.end(), token) == kFiller.end()) {
      return false;
    }
  }
  return true;
}

IdentificationVerdict MatchIdentification(
    const std::optional<std::string>& claimed_span,
    std::string_view true_distractor, bool no_irrelevant_claimed,
    double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "identification threshold must be in (0, 1]");
  }
  IdentificationVerdict verdict;
  verdict.claimed_span = claimed_span;
  if (no_irrelevant_claimed ||
      (claimed_span && IsNoIrrelevantClaim(*claimed_span))) {
    verdict.category = RecognitionCategory::kNoIrrelevant;
    verdict.matched_score = 0.0;
    return verdict;
  }
  if (!claimed_span) {
    verdict.category = RecognitionCategory::kOtherInformation;
    verdict.matched_score = 0.0;
    return verdict;
  }
  verdict.matched_score = TokenF1(*claimed_span, true_distractor);
  verdict.category = verdict.matched_score >= threshold
                         ? RecognitionCategory::kIrrelevantCorrect
                         : RecognitionCategory::kOtherInformation;
  return verdict;
}

std::string ParseFiltration(std::string_view completion) {
  const auto pos = completion.rfind(kProcessedContextMarker);
  if (pos == std::string_view::npos) {
    throw Error(ErrorCode::kParse,
                "filtration output lacks \"Processed Context:\": " +
                    Utf8Head(completion, 120));
  }
  std::string_view rest =
      Trim(completion.substr(pos + kProcessedContextMarker.size()));
  if (rest.size() >= 2 && rest.front() == '{' && rest.back() == '}') {
    rest = Trim(rest.substr(1, rest.size() - 2));
  }
  if (!rest.empty() && rest.back() == ']' &&
      rest.find('[') == std::string_view::npos) {
    rest = Trim(rest.substr(0, rest.size() - 1));
  }
  if (rest.empty()) {
    throw Error(ErrorCode::kParse, "empty processed context");
  }
  return std::string(rest);
}

std::string ExtractIdentificationClaim(std::string_view completion) {
  std::string_view claim = completion;
  if (auto pos = RFindCaseInsensitive(completion, kSentinel);
      pos != std::string_view::npos) {
    claim = completion.substr(pos + kSentinel.size());
  }
  claim = Trim(claim);
  if (!claim.empty() && claim.front() == ':') claim = Trim(claim.substr(1));
  if (!claim.empty() && claim.back() == ']') {
    claim = Trim(claim.substr(0, claim.size() - 1));
  }
  return std::string(claim);
}

}  // namespace irbench
