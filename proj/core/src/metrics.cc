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

#include "irbench/metrics.h"

#include <map>
#include <set>
#include <string>

#include "irbench/error.h"

namespace irbench {
namespace {

void RequireNonEmpty(std::span<const RunRecord> records, const char* what) {
  if (records.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " of an empty record list");
  }
}

const IdentificationVerdict& VerdictOf(const RunRecord& r) {
  if (!r.identification) {
    throw Error(ErrorCode::kInvalidArgument,
                "record " + r.problem_id + " has no identification verdict");
  }
  return *r.identification;
}

std::size_t CategoryIndex(RecognitionCategory c) {
  switch (c) {
    case RecognitionCategory::kIrrelevantCorrect:
      return 0;
    case RecognitionCategory::kOtherInformation:
      return 1;
    case RecognitionCategory::kNoIrrelevant:
      return 2;
  }
  return 2;
}

}  // namespace

double ComputeAccuracy(std::span<const RunRecord> records) {
  RequireNonEmpty(records, "accuracy");
  std::size_t correct = 0;
  for (const RunRecord& r : records) correct += r.correct ? 1 : 0;
  return double(correct) / double(records.size());
}

double ComputeIdentificationRate(std::span<const RunRecord> records) {
  RequireNonEmpty(records, "identification rate");
  return ComputeRecognitionBreakdown(records).irrelevant();
}

double RecognitionBreakdown::Fraction(std::size_t i) const {
  if (total == 0 || i >= counts.size()) return 0.0;
  return double(counts[i]) / double(total);
}

RecognitionBreakdown ComputeRecognitionBreakdown(
    std::span<const RunRecord> records) {
  RecognitionBreakdown b;
  for (const RunRecord& r : records) {
    ++b.counts[CategoryIndex(VerdictOf(r).category)];
    ++b.total;
  }
  return b;
}

std::optional<double> ErrorAttribution::fraction() const {
  if (errors_on_perturbed_only == 0) return std::nullopt;
  return double(identified_among_errors) / double(errors_on_perturbed_only);
}

ErrorAttribution AttributeErrors(std::span<const RunRecord> perturbed,
                                 std::span<const RunRecord> original) {
  std::map<std::string_view, const RunRecord*> by_id;
  for (const RunRecord& r : original) {
    if (!by_id.emplace(r.problem_id, &r).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate id in original records: " + r.problem_id);
    }
  }
  if (perturbed.size() != original.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "record sets differ in size: " +
                    std::to_string(perturbed.size()) + " vs " +
                    std::to_string(original.size()));
  }
  ErrorAttribution out;
  std::set<std::string_view> seen;
  for (const RunRecord& p : perturbed) {
    auto it = by_id.find(p.problem_id);
    if (it == by_id.end() || !seen.insert(p.problem_id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "record sets are not aligned at id " + p.problem_id);
    }
    if (it->second->correct && !p.correct) {
      ++out.errors_on_perturbed_only;
      if (p.identification &&
          p.identification->category == RecognitionCategory::kIrrelevantCorrect) {
        ++out.identified_among_errors;
      }
    }
  }
  return out;
}

std::vector<RunRecord> AttachIdentification(
    std::span<const RunRecord> records,
    std::span<const RunRecord> identification_run) {
  std::map<std::string_view, const IdentificationVerdict*> verdicts;
  for (const RunRecord& r : identification_run) {
    if (r.identification) verdicts[r.problem_id] = &*r.identification;
  }
  std::vector<RunRecord> out(records.begin(), records.end());
  for (RunRecord& r : out) {
    if (auto it = verdicts.find(r.problem_id); it != verdicts.end()) {
      r.identification = *it->second;
    }
  }
  return out;
}

std::optional<double> WeakIrrelevance::proportion() const {
  if (unrecognized == 0) return std::nullopt;
  return double(weak) / double(unrecognized);
}

std::vector<RunRecord> UnrecognizedRecords(std::span<const RunRecord> records) {
  std::vector<RunRecord> out;
  for (const RunRecord& r : records) {
    if (!r.identification ||
        r.identification->category != RecognitionCategory::kIrrelevantCorrect) {
      out.push_back(r);
    }
  }
  return out;
}

std::map<std::string, WeakIrrelevance> WeakIrrelevanceAnalysis(
    std::span<const RunRecord> unrecognized,
    const std::map<std::string, std::vector<RunRecord>>& results_per_method) {
  std::map<std::string, WeakIrrelevance> out;
  for (const auto& [label, results] : results_per_method) {
    std::map<std::string_view, bool> correct;
    for (const RunRecord& r : results) correct[r.problem_id] = r.correct;
    WeakIrrelevance w;
    w.unrecognized = unrecognized.size();
    for (const RunRecord& u : unrecognized) {
      auto it = correct.find(u.problem_id);
      if (it != correct.end() && it->second) ++w.weak;
    }
    out[label] = w;
  }
  return out;
}

}  // namespace irbench
