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


#include <gtest/gtest.h>

#include <set>
#include <string>

#include "irbench/rational.h"
#include "irbench/rng.h"
#include "irbench/text.h"

namespace irbench {
namespace {

TEST(Rational, ParsesPlainLiterals) {
  EXPECT_EQ(ParseNumber("72"), Rational(72));
  EXPECT_EQ(ParseNumber(" 1,500 "), Rational(1500));
  EXPECT_EQ(ParseNumber("12,345,678"), Rational(12345678));
  EXPECT_EQ(ParseNumber("-7"), Rational(-7));
  EXPECT_EQ(ParseNumber("8.25"), Rational(33, 4));
  EXPECT_EQ(ParseNumber("3/8"), Rational(3, 8));
  EXPECT_EQ(ParseNumber("0.08"), Rational(2, 25));
  EXPECT_EQ(ParseNumber("09"), Rational(9));
  EXPECT_EQ(ParseNumber("010"), Rational(10));
  EXPECT_EQ(ParseNumber("1/08"), Rational(1, 8));
}

TEST(Rational, RejectsNonLiterals) {
  for (const char* bad : {"", "-", "1,2", "1.", ".5", "1/0", "abc", "1e5",
                          "1,,000", "2/", "1.2.3", "1,0000", "1234,567", ",100"}) {
    EXPECT_FALSE(ParseNumber(bad)) << bad;
  }
}

TEST(Rational, FormatsCanonically) {
  EXPECT_EQ(FormatRational(Rational(72)), "72");
  EXPECT_EQ(FormatRational(Rational(5, 2)), "2.5");
  EXPECT_EQ(FormatRational(Rational(-1, 8)), "-0.125");
  EXPECT_EQ(FormatRational(Rational(1, 3)), "1/3");
  EXPECT_EQ(FormatRational(Rational(1, 100)), "0.01");
}

TEST(Rational, FormatParseRoundTrip) {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    Rational v(rng.Between(-100000, 100000), rng.Between(1, 400));
    auto back = ParseNumber(FormatRational(v));
    ASSERT_TRUE(back) << FormatRational(v);
    EXPECT_EQ(*back, v);
  }
}

TEST(Text, Basics) {
  EXPECT_EQ(Trim("  a b \n"), "a b");
  EXPECT_EQ(ToLowerAscii("AbC"), "abc");
  EXPECT_EQ(ReplaceAll("a-b-c", "-", "+"), "a+b+c");
  EXPECT_EQ(CollapseWhitespace("  a \n\t b  "), "a b");
  EXPECT_EQ(RFindCaseInsensitive("x THE y the z", "the"), 8u);
  EXPECT_EQ(RFindCaseInsensitive("x THE y", "the"), 2u);
  EXPECT_TRUE(StartsWith("abc", "ab"));
  EXPECT_TRUE(EndsWith("abc", "bc"));
}

TEST(Text, ScanNumbersBoundaries) {
  auto tokens = ScanNumbers("3rd x2 25% -4 1,000 $5");
  ASSERT_EQ(tokens.size(), 4u);
  EXPECT_EQ(tokens[0].value, 25);
  EXPECT_TRUE(tokens[0].is_percent);
  EXPECT_EQ(GuardValue(tokens[0]), Rational(1, 4));
  EXPECT_EQ(tokens[1].value, -4);
  EXPECT_EQ(tokens[2].value, 1000);
  EXPECT_EQ(tokens[3].value, 5);
}

TEST(Text, Sha256KnownVector) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Rng, MixSeedSeparatesStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(MixSeed(42, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(MixSeed(42, 7), MixSeed(42, 7));
}

TEST(Rng, BelowStaysInRangeAndIsReproducible) {
  Rng a(9), b(9);
  for (int i = 0; i < 1000; ++i) {
    auto x = a.Below(7);
    EXPECT_LT(x, 7u);
    EXPECT_EQ(x, b.Below(7));
  }
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    auto v = c.Between(-3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
  }
}

}  // namespace
}  // namespace irbench
