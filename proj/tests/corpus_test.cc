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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "irbench/error.h"
#include "irbench/perturb.h"
#include "synthetic.h"

namespace irbench {
namespace {

std::vector<std::string> Texts(std::string_view q) {
  std::vector<std::string> out;
  for (const auto& s : SplitSentences(q)) out.push_back(s.text);
  return out;
}

TEST(Segmentation, HandLabeledFixture) {
  std::ifstream in(testing::FixturePath("segmentation/sentences.jsonl"));
  std::size_t cases = 0;
  for (std::string line; std::getline(in, line);) {
    auto j = nlohmann::json::parse(line);
    ++cases;
    EXPECT_EQ(Texts(j["text"].get<std::string>()),
              j["sentences"].get<std::vector<std::string>>())
        << j["id"];
  }
  EXPECT_EQ(cases, 50u);
}

TEST(Segmentation, SpansPointIntoTheText) {
  const std::string q = "Mr. Lee has 3 cats.  She has 2. How many?";
  for (const auto& s : SplitSentences(q)) {
    EXPECT_EQ(q.substr(s.start, s.end - s.start), s.text);
  }
}

TEST(GoldAnswer, ParsesGsm8kFields) {
  EXPECT_EQ(ParseGoldAnswer("6 + 9 = 15\n#### 15"), 15);
  EXPECT_EQ(ParseGoldAnswer("#### 1,500"), 1500);
  EXPECT_EQ(ParseGoldAnswer("#### $8.25"), Rational(33, 4));
  EXPECT_EQ(ParseGoldAnswer("#### -7"), -7);
  EXPECT_EQ(ParseGoldAnswer("42"), 42);
  EXPECT_THROW(ParseGoldAnswer("#### none"), Error);
}

TEST(Corpus, LoadsSampleFixture) {
  Corpus c = LoadCorpus(testing::FixturePath("corpus/sample_gsm8k.jsonl"),
                        CorpusFormat::kGsm8k);
  ASSERT_EQ(c.size(), 12u);
  EXPECT_EQ(c.entries[0].id(), "sample-000");
  EXPECT_EQ(c.entries[0].problem.gold_answer, 180);
  EXPECT_TRUE(c.entries[0].problem.gold_rationale);
  EXPECT_FALSE(c.entries[0].perturbed);
}

TEST(Corpus, SaveReproducesSourceBytes) {
  const auto path = testing::FixturePath("corpus/sample_gsm8k.jsonl");
  std::ifstream in(path, std::ios::binary);
  std::stringstream original;
  original << in.rdbuf();
  std::istringstream again(original.str());
  Corpus c = ReadCorpus(again, CorpusFormat::kGsm8k, "sample");
  std::ostringstream out;
  WriteCorpus(c, out);
  std::istringstream reread(out.str());
  Corpus d = ReadCorpus(reread, CorpusFormat::kGsm8k, "sample");
  ASSERT_EQ(c.size(), d.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(c.entries[i], d.entries[i]);
  }
}

TEST(Corpus, MalformedRowsNameLineAndField) {
  std::istringstream in(
      "{\"id\": \"a\", \"question\": \"Q?\", \"answer\": \"#### 1\"}\n"
      "{\"id\": \"b\", \"question\": \"Q?\"}\n");
  try {
    ReadCorpus(in, CorpusFormat::kGsm8k);
    FAIL() << "expected LineError";
  } catch (const LineError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.field(), "answer");
  }
}

TEST(Corpus, DuplicateIdsRejected) {
  std::istringstream in(
      "{\"id\": \"a\", \"question\": \"Q?\", \"answer\": \"#### 1\"}\n"
      "{\"id\": \"a\", \"question\": \"R?\", \"answer\": \"#### 2\"}\n");
  try {
    ReadCorpus(in, CorpusFormat::kGsm8k);
    FAIL() << "expected LineError";
  } catch (const LineError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateId);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Corpus, NotJsonIsAParseError) {
  std::istringstream in("not json\n");
  EXPECT_THROW(ReadCorpus(in, CorpusFormat::kGsm8k), LineError);
}

TEST(Gsmir, RoundTripsAndStrips) {
  Corpus gsmir = testing::SyntheticGsmir(40, 5);
  ASSERT_GE(gsmir.size(), 35u);
  std::ostringstream out;
  WriteCorpus(gsmir, out);
  std::istringstream in(out.str());
  Corpus back = ReadCorpus(in, CorpusFormat::kGsmir, gsmir.name);
  ASSERT_EQ(back.size(), gsmir.size());
  std::ostringstream again;
  WriteCorpus(back, again);
  EXPECT_EQ(again.str(), out.str());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back.entries[i].perturbed->question,
              gsmir.entries[i].perturbed->question);
    EXPECT_EQ(back.entries[i].perturbed->base.question,
              gsmir.entries[i].perturbed->base.question);
    EXPECT_EQ(back.entries[i].problem.gold_answer,
              gsmir.entries[i].problem.gold_answer);
  }
  Corpus slc = StripCorpus(gsmir);
  ASSERT_EQ(slc.size(), gsmir.size());
  for (std::size_t i = 0; i < slc.size(); ++i) {
    EXPECT_EQ(slc.entries[i].id(), gsmir.entries[i].id());
    EXPECT_EQ(slc.entries[i].question(),
              gsmir.entries[i].perturbed->base.question);
    EXPECT_FALSE(slc.entries[i].perturbed);
  }
}

TEST(Gsmir, RowWhoseDistractorIsMissingIsCorrupt) {
  std::istringstream in(
      "{\"id\": \"a\", \"original_question\": \"Ann has 2. How many?\", "
      "\"question\": \"Ann has 2. How many?\", \"distractor\": \"Ben likes 5 "
      "cats.\", \"insertion_index\": 0, \"template_kind\": \"opinion\", "
      "\"answer\": \"#### 2\"}\n");
  EXPECT_THROW(ReadCorpus(in, CorpusFormat::kGsmir), LineError);
}

}  // namespace
}  // namespace irbench
