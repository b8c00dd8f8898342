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

#ifndef IRBENCH_METRICS_H_
#define IRBENCH_METRICS_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irbench/run_record.h"

namespace irbench {

// Throws Error(kInvalidArgument) for an empty record list.
double ComputeAccuracy(std::span<const RunRecord> records);

// Fraction with category irrelevant_correct. Throws for an empty list or a
// record without a verdict.
double ComputeIdentificationRate(std::span<const RunRecord> records);

struct RecognitionBreakdown {
  std::size_t total = 0;
  std::array<std::size_t, 3> counts{};  // irrelevant, other, none

  double irrelevant() const { return Fraction(0); }
  double other() const { return Fraction(1); }
  double none() const { return Fraction(2); }
  double Fraction(std::size_t i) const;

  friend bool operator==(const RecognitionBreakdown&,
                         const RecognitionBreakdown&) = default;
};

RecognitionBreakdown ComputeRecognitionBreakdown(
    std::span<const RunRecord> records);

struct ErrorAttribution {
  std::size_t errors_on_perturbed_only = 0;
  std::size_t identified_among_errors = 0;
  // Absent when no instance qualifies.
  std::optional<double> fraction() const;

  friend bool operator==(const ErrorAttribution&,
                         const ErrorAttribution&) = default;
};

// Counts problems right on the original but wrong on the perturbed
// question, and how many of those carry an irrelevant_correct verdict on
// the perturbed record. Records are paired by problem id; throws
// Error(kInvalidArgument) if the id sets differ.
ErrorAttribution AttributeErrors(std::span<const RunRecord> perturbed,
                                 std::span<const RunRecord> original);

// Copies verdicts from an identification run onto matching records.
std::vector<RunRecord> AttachIdentification(
    std::span<const RunRecord> records,
    std::span<const RunRecord> identification_run);

struct WeakIrrelevance {
  std::size_t unrecognized = 0;
  std::size_t weak = 0;
  std::optional<double> proportion() const;

  friend bool operator==(const WeakIrrelevance&,
                         const WeakIrrelevance&) = default;
};

// Records whose verdict is not irrelevant_correct.
std::vector<RunRecord> UnrecognizedRecords(std::span<const RunRecord> records);

// For each method label: how many unrecognized problems that method still
// answered correctly.
std::map<std::string, WeakIrrelevance> WeakIrrelevanceAnalysis(
    std::span<const RunRecord> unrecognized,
    const std::map<std::string, std::vector<RunRecord>>& results_per_method);

}  // namespace irbench

#endif  // IRBENCH_METRICS_H_
