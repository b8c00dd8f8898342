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

#include "irbench/text.h"

#include <openssl/evp.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "irbench/error.h"

namespace irbench {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsAlnum(char c) {
  return IsDigit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
char Lower(char c) { return (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c; }

}  // namespace

std::string_view Trim(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && IsSpace(text[b])) ++b;
  while (e > b && IsSpace(text[e - 1])) --e;
  return text.substr(b, e - b);
}

std::string ToLowerAscii(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = Lower(c);
  return out;
}

std::string ReplaceAll(std::string text, std::string_view from,
                       std::string_view to) {
  if (from.empty()) return text;
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

bool StartsWith(std::string_view text, std::string_view prefix) {
  return text.substr(0, prefix.size()) == prefix;
}

bool EndsWith(std::string_view text, std::string_view suffix) {
  return text.size() >= suffix.size() &&
         text.substr(text.size() - suffix.size()) == suffix;
}

std::size_t RFindCaseInsensitive(std::string_view haystack,
                                 std::string_view needle) {
  if (needle.empty() || needle.size() > haystack.size()) {
    return std::string_view::npos;
  }
  for (std::size_t i = haystack.size() - needle.size() + 1; i-- > 0;) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size(); ++j) {
      if (Lower(haystack[i + j]) != Lower(needle[j])) {
        match = false;
        break;
      }
    }
    if (match) return i;
  }
  return std::string_view::npos;
}

std::string CollapseWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : Trim(text)) {
    if (IsSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<NumberToken> ScanNumbers(std::string_view text) {
  std::vector<NumberToken> tokens;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    if (!IsDigit(text[i])) {
      ++i;
      continue;
    }
    const bool attached_before =
        i > 0 && (IsAlnum(text[i - 1]) || text[i - 1] == '.' ||
                  text[i - 1] == '_');
    std::size_t begin = i;
    bool negative = false;
    if (i > 0 && text[i - 1] == '-' && (i < 2 || !IsAlnum(text[i - 2]))) {
      negative = true;
      begin = i - 1;
    }

    std::size_t j = i;
    while (j < n && IsDigit(text[j])) ++j;
    // Thousands groups: exactly three digits after each comma.
    while (j + 3 < n && text[j] == ',' && IsDigit(text[j + 1]) &&
           IsDigit(text[j + 2]) && IsDigit(text[j + 3]) &&
           (j + 4 >= n || !IsDigit(text[j + 4]))) {
      j += 4;
    }
    std::string literal(text.substr(i, j - i));
    if (j + 1 < n && text[j] == '.' && IsDigit(text[j + 1])) {
      std::size_t k = j + 1;
      while (k < n && IsDigit(text[k])) ++k;
      literal.append(text.substr(j, k - j));
      j = k;
    } else if (j + 1 < n && text[j] == '/' && IsDigit(text[j + 1])) {
      std::size_t k = j + 1;
      while (k < n && IsDigit(text[k])) ++k;
      std::string candidate = literal + std::string(text.substr(j, k - j));
      if (ParseNumber(candidate)) {
        literal = std::move(candidate);
        j = k;
      }
    }
    bool percent = false;
    if (j < n && text[j] == '%') {
      percent = true;
      ++j;
    }
    const bool attached_after = j < n && (IsAlnum(text[j]) || text[j] == '_');
    if (attached_before || attached_after) {
      // Skip the whole alphanumeric run so its digits are not re-read.
      while (j < n && (IsAlnum(text[j]) || text[j] == '_')) ++j;
      i = j;
      continue;
    }
    if (auto value = ParseNumber(literal)) {
      NumberToken token;
      token.begin = begin;
      token.end = j;
      token.value = negative ? Rational(-*value) : *value;
      token.is_percent = percent;
      tokens.push_back(std::move(token));
    }
    i = j;
  }
  return tokens;
}

Rational GuardValue(const NumberToken& token) {
  return token.is_percent ? Rational(token.value / 100) : token.value;
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace irbench
