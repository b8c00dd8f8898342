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

#ifndef IRBENCH_TEXT_H_
#define IRBENCH_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "irbench/rational.h"

namespace irbench {

std::string_view Trim(std::string_view text);
std::string ToLowerAscii(std::string_view text);
std::string ReplaceAll(std::string text, std::string_view from,
                       std::string_view to);
bool StartsWith(std::string_view text, std::string_view prefix);
bool EndsWith(std::string_view text, std::string_view suffix);

// Byte offset of the last case-insensitive (ASCII) occurrence of needle, or
// npos.
std::size_t RFindCaseInsensitive(std::string_view haystack,
                                 std::string_view needle);

// Collapses every whitespace run to one space and trims the ends.
std::string CollapseWhitespace(std::string_view text);

// A standalone number token found in free text.
struct NumberToken {
  std::size_t begin = 0;  // byte offset of the first character
  std::size_t end = 0;    // one past the last character (including any '%')
  Rational value;         // as written; '%' is reported via is_percent
  bool is_percent = false;
};

// Finds standalone numeric tokens: optional '-' and currency sign, digits
// with optional thousands groups, optional decimal part or "/denominator",
// optional '%'. A token may not touch a letter or digit on either side, so
// "3rd" and "x2" yield nothing. Never throws.
std::vector<NumberToken> ScanNumbers(std::string_view text);

// Value of a token in the distractor-guard convention: "25%" is 1/4.
Rational GuardValue(const NumberToken& token);

std::string Sha256Hex(std::string_view data);

}  // namespace irbench

#endif  // IRBENCH_TEXT_H_
