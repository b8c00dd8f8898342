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

#ifndef IRBENCH_RATIONAL_H_
#define IRBENCH_RATIONAL_H_

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace irbench {

using Rational = boost::multiprecision::cpp_rational;

// Parses a plain numeric literal: optional sign, digits with optional
// thousands commas, optional decimal part, or a simple fraction "a/b".
// Surrounding whitespace is ignored. Returns nullopt on anything else.
std::optional<Rational> ParseNumber(std::string_view text);

// Canonical rendering: integers bare ("72"), terminating decimals in
// decimal form ("2.5"), everything else as "p/q". ParseNumber accepts
// every string this produces.
std::string FormatRational(const Rational& value);

}  // namespace irbench

#endif  // IRBENCH_RATIONAL_H_
