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

#include "irbench/rational.h"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace irbench {
namespace {

using boost::multiprecision::cpp_int;

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

// Digits with optional comma thousands separators ("1,200"): a lead group
// of one to three digits, then groups of exactly three. Returns the bare
// digit string, or nullopt.
std::optional<std::string> IntegerDigits(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::string digits;
  digits.reserve(s.size());
  std::size_t group = 0;
  bool grouped = false;
  for (char c : s) {
    if (IsDigit(c)) {
      digits.push_back(c);
      ++group;
    } else if (c == ',' && group > 0 && (grouped ? group == 3 : group <= 3)) {
      grouped = true;
      group = 0;
    } else {
      return std::nullopt;
    }
  }
  if (group == 0 || (grouped && group != 3)) return std::nullopt;
  return digits;
}

// cpp_int's string constructor reads a leading 0 as octal.
cpp_int Decimal(std::string_view digits) {
  cpp_int r = 0;
  for (char c : digits) r = r * 10 + (c - '0');
  return r;
}

cpp_int Pow10(std::size_t k) {
  cpp_int r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= 10;
  return r;
}

}  // namespace

std::optional<Rational> ParseNumber(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && (text[b] == ' ' || text[b] == '\t' || text[b] == '\n' ||
                   text[b] == '\r')) {
    ++b;
  }
  while (e > b && (text[e - 1] == ' ' || text[e - 1] == '\t' ||
                   text[e - 1] == '\n' || text[e - 1] == '\r')) {
    --e;
  }
  std::string_view s = text.substr(b, e - b);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) return std::nullopt;

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = IntegerDigits(s.substr(0, slash));
    auto den = IntegerDigits(s.substr(slash + 1));
    if (!num || !den) return std::nullopt;
    cpp_int d = Decimal(*den);
    if (d == 0) return std::nullopt;
    value = Rational(Decimal(*num), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = IntegerDigits(s.substr(0, dot));
    std::string_view frac = s.substr(dot + 1);
    if (!whole || frac.empty()) return std::nullopt;
    for (char c : frac) {
      if (!IsDigit(c)) return std::nullopt;
    }
    cpp_int scale = Pow10(frac.size());
    value = Rational(Decimal(*whole) * scale + Decimal(frac),
                     scale);
  } else {
    auto whole = IntegerDigits(s);
    if (!whole) return std::nullopt;
    value = Rational(Decimal(*whole));
  }
  return negative ? Rational(-value) : value;
}

std::string FormatRational(const Rational& value) {
  const cpp_int num = boost::multiprecision::numerator(value);
  const cpp_int den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();

  cpp_int rest = den;
  std::size_t twos = 0, fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return num.str() + "/" + den.str();

  const std::size_t places = twos > fives ? twos : fives;
  const cpp_int scaled = num * (Pow10(places) / den);
  const bool negative = scaled < 0;
  std::string digits = (negative ? cpp_int(-scaled) : scaled).str();
  if (digits.size() <= places) {
    digits.insert(0, places - digits.size() + 1, '0');
  }
  digits.insert(digits.size() - places, ".");
  return negative ? "-" + digits : digits;
}

}  // namespace irbench
