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

#include <gtest/gtest.h>

#include <cctype>
#include <fstream>
#include <optional>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "irbench/error.h"
#include "irbench/rational.h"
#include "synthetic.h"

namespace irbench {
namespace {

// Independent reading of the extraction rule, built on std::regex.
Rational Decimal(std::string digits) {
  Rational v = 0;
  for (char c : digits) v = v * 10 + (c - '0');
  return v;
}

std::optional<Rational> OracleLiteral(std::string literal) {
  std::erase(literal, ',');
  if (auto slash = literal.find('/'); slash != std::string::npos) {
    Rational den = Decimal(literal.substr(slash + 1));
    if (den == 0) return std::nullopt;
    return Decimal(literal.substr(0, slash)) / den;
  }
  if (auto dot = literal.find('.'); dot != std::string::npos) {
    std::string frac = literal.substr(dot + 1);
    Rational scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    return Decimal(literal.substr(0, dot)) + Decimal(frac) / scale;
  }
  return Decimal(literal);
}

bool Word(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Rational> OracleNumbers(const std::string& text) {
  static const std::regex kToken(
      R"re([0-9]+(?:,[0-9]{3}(?![0-9]))*(?:\.[0-9]+|/0*[1-9][0-9]*)?%?)re");
  std::vector<Rational> out;
  std::smatch m;
  std::size_t pos = 0;
  while (pos < text.size() &&
         std::regex_search(text.cbegin() + pos, text.cend(), m, kToken)) {
    const std::size_t b = pos + m.position(), e = b + m.length();
    pos = e;
    if (b > 0 && (Word(text[b - 1]) || text[b - 1] == '.')) {
      while (pos < text.size() && Word(text[pos])) ++pos;
      continue;
    }
    if (e < text.size() && Word(text[e])) {
      while (pos < text.size() && Word(text[pos])) ++pos;
      continue;
    }
    std::string literal = m.str();
    if (literal.back() == '%') literal.pop_back();
    auto v = OracleLiteral(literal);
    if (!v) continue;
    const bool negative =
        b > 0 && text[b - 1] == '-' && (b < 2 || !std::isalnum(static_cast<unsigned char>(text[b - 2])));
    out.push_back(negative ? Rational(-*v) : *v);
  }
  return out;
}

std::optional<Rational> OracleExtract(const std::string& text) {
  std::string lower = text;
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const std::string sentinel = "the answer is";
  std::size_t last = std::string::npos;
  for (std::size_t i = 0; i + sentinel.size() <= lower.size(); ++i) {
    if (lower.compare(i, sentinel.size(), sentinel) == 0) last = i;
  }
  if (last != std::string::npos) {
    auto nums = OracleNumbers(text.substr(last + sentinel.size()));
    if (!nums.empty()) return nums.front();
  }
  auto nums = OracleNumbers(text);
  if (nums.empty()) return std::nullopt;
  return nums.back();
}

struct Case {
  std::string id;
  std::string completion;
  std::optional<Rational> expected;
  std::string method;
};

std::vector<Case> LoadCases() {
  std::ifstream in(testing::FixturePath("extraction/completions.jsonl"));
  std::vector<Case> cases;
  for (std::string line; std::getline(in, line);) {
    auto j = nlohmann::json::parse(line);
    Case c{j["id"], j["completion"], std::nullopt, j["method"]};
    if (!j["expected"].is_null()) c.expected = ParseNumber(j["expected"].get<std::string>());
    cases.push_back(std::move(c));
  }
  return cases;
}

TEST(ExtractionFixture, HasEnoughCases) { EXPECT_GE(LoadCases().size(), 40u); }

TEST(ExtractionFixture, OracleAgreesWithExpected) {
  for (const Case& c : LoadCases()) {
    EXPECT_EQ(OracleExtract(c.completion), c.expected) << c.id;
  }
}

TEST(ExtractionFixture, ExtractorMatchesExpected) {
  for (const Case& c : LoadCases()) {
    const ExtractedAnswer got = ExtractFinalAnswer(c.completion);
    EXPECT_EQ(got.value, c.expected) << c.id << ": " << c.completion;
    EXPECT_EQ(ExtractionMethodName(got.method), c.method) << c.id;
  }
}

TEST(Extraction, AgreesWithOracleOnStructuredNoise) {
  const std::string alphabet = "0123456789 ,./-%$abAT\n";
  std::mt19937_64 rng(7);
  for (int n = 0; n < 3000; ++n) {
    std::string text;
    const int len = static_cast<int>(rng() % 24);
    for (int i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
    if (rng() % 3 == 0) text.insert(rng() % (text.size() + 1), " The answer is ");
    EXPECT_EQ(ExtractFinalAnswer(text).value, OracleExtract(text)) << "[" << text << "]";
  }
}

TEST(Extraction, TotalOnRandomBytes) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 10000; ++n) {
    std::string bytes(rng() % 200, '\0');
    for (char& c : bytes) c = static_cast<char>(rng() & 0xFF);
    EXPECT_NO_THROW(ExtractFinalAnswer(bytes));
  }
}

TEST(Extraction, LongDigitRunStaysExact) {
  const std::string digits(400, '9');
  auto got = ExtractFinalAnswer("The answer is " + digits);
  ASSERT_TRUE(got.value);
  EXPECT_EQ(FormatRational(*got.value), digits);
}

TEST(Extraction, RawTailIsBoundedAndValidUtf8) {
  std::string text = "The answer is 5 ";
  for (int i = 0; i < 60; ++i) text += "\xC3\xA9";
  auto got = ExtractFinalAnswer(text);
  EXPECT_LE(got.raw_tail.size(), 80u);
  ASSERT_FALSE(got.raw_tail.empty());
  EXPECT_NE(static_cast<unsigned char>(got.raw_tail.back()), 0xC3);
}

TEST(Extraction, ScoreAnswerIsExact) {
  EXPECT_TRUE(ScoreAnswer(ExtractFinalAnswer("The answer is 0.5"), Rational(1, 2)));
  EXPECT_FALSE(ScoreAnswer(ExtractFinalAnswer("The answer is 0.51"), Rational(1, 2)));
  EXPECT_FALSE(ScoreAnswer(ExtractFinalAnswer("no number"), Rational(0)));
}

TEST(Matching, NormalizeForMatch) {
  EXPECT_EQ(NormalizeForMatch("  Hello,   WORLD!  "), "hello world");
  EXPECT_EQ(NormalizeForMatch("Café's \"menu\""), "cafés menu");
}

TEST(Matching, TokenF1) {
  EXPECT_DOUBLE_EQ(TokenF1("a b c", "a b c"), 1.0);
  EXPECT_DOUBLE_EQ(TokenF1("", ""), 1.0);
  EXPECT_DOUBLE_EQ(TokenF1("a", ""), 0.0);
  // precision 2/3, recall 2/4
  EXPECT_NEAR(TokenF1("a b x", "a b c d"), 2 * (2.0 / 3) * 0.5 / (2.0 / 3 + 0.5), 1e-12);
  // multiset overlap counts repeats once per match
  EXPECT_NEAR(TokenF1("a a", "a b"), 0.5, 1e-12);
}

TEST(Matching, NoIrrelevantClaims) {
  EXPECT_TRUE(IsNoIrrelevantClaim("no irrelevant information"));
  EXPECT_TRUE(IsNoIrrelevantClaim("There is no irrelevant information."));
  EXPECT_TRUE(IsNoIrrelevantClaim("The answer is no irrelevant information exists in the question"));
  EXPECT_TRUE(IsNoIrrelevantClaim("NO IRRELEVANT INFORMATION"));
  EXPECT_FALSE(IsNoIrrelevantClaim("no irrelevant information except Ann's dog"));
  EXPECT_FALSE(IsNoIrrelevantClaim("Ann has 3 dogs."));
}

TEST(Matching, VerbatimScoresOne) {
  const std::string d = "Ann's brother thinks 7 apples is too many.";
  auto v = MatchIdentification(d, d, false);
  EXPECT_EQ(v.category, RecognitionCategory::kIrrelevantCorrect);
  EXPECT_DOUBLE_EQ(v.matched_score, 1.0);
}

TEST(Matching, SentinelAndFlagMapToNoIrrelevant) {
  auto a = MatchIdentification(std::string("no irrelevant information"), "x y", false);
  EXPECT_EQ(a.category, RecognitionCategory::kNoIrrelevant);
  auto b = MatchIdentification(std::string("x y"), "x y", true);
  EXPECT_EQ(b.category, RecognitionCategory::kNoIrrelevant);
  auto c = MatchIdentification(std::nullopt, "x y", false);
  EXPECT_EQ(c.category, RecognitionCategory::kOtherInformation);
}

TEST(Matching, OtherInformationBelowThreshold) {
  auto v = MatchIdentification(std::string("Ann has 3 dogs."),
                               "Ben thinks cats are cute.", false);
  EXPECT_EQ(v.category, RecognitionCategory::kOtherInformation);
  EXPECT_LT(v.matched_score, kDefaultIdThreshold);
}

TEST(Matching, ThresholdValidated) {
  EXPECT_THROW(MatchIdentification(std::string("a"), "a", false, 0.0), Error);
  EXPECT_THROW(MatchIdentification(std::string("a"), "a", false, 1.5), Error);
  EXPECT_NO_THROW(MatchIdentification(std::string("a"), "a", false, 1.0));
}

TEST(Filtration, ParsesLastMarker) {
  EXPECT_EQ(ParseFiltration("Processed Context: Ann has 3 dogs."), "Ann has 3 dogs.");
  EXPECT_EQ(ParseFiltration("x Processed Context: a\nProcessed Context: {b c}"), "b c");
  EXPECT_THROW(ParseFiltration("Ann has 3 dogs."), Error);
  EXPECT_THROW(ParseFiltration("Processed Context:   "), Error);
}

TEST(Identification, ClaimExtraction) {
  EXPECT_EQ(ExtractIdentificationClaim("The answer is Ann likes cats.]"), "Ann likes cats.");
  EXPECT_EQ(ExtractIdentificationClaim("the answer is: no irrelevant information"),
            "no irrelevant information");
  EXPECT_EQ(ExtractIdentificationClaim("  Ann likes cats. "), "Ann likes cats.");
}

}  // namespace
}  // namespace irbench
