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

#ifndef IRBENCH_REPORT_H_
#define IRBENCH_REPORT_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "irbench/metrics.h"

namespace irbench {

struct MetricsReport {
  std::string method;   // row label, e.g. "COT+ATF"
  std::string dataset;  // column label, e.g. "GSMIR"
  std::size_t record_count = 0;
  std::optional<double> accuracy;
  std::optional<double> identification_rate;
  std::optional<RecognitionBreakdown> recognition_breakdown;
  std::optional<ErrorAttribution> error_attribution;
  std::map<std::string, WeakIrrelevance> weak_irrelevance;
  nlohmann::ordered_json config_echo = nlohmann::ordered_json::object();

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

nlohmann::ordered_json MetricsReportToJson(const MetricsReport& report);
MetricsReport MetricsReportFromJson(const nlohmann::ordered_json& json);
MetricsReport LoadMetricsReport(const std::filesystem::path& path);

enum class ReportFormat { kMarkdown, kCsv, kJson };

ReportFormat ParseReportFormat(std::string_view name);

// 0.552 -> "55.2"
std::string FormatPercent(double fraction);
// 0.7894 -> "0.789"
std::string FormatFraction(double fraction);

// Method rows by dataset columns (accuracy x100, one decimal), followed by
// whichever of identification rate, recognition breakdown, error
// attribution and weak irrelevance are present, then the configuration.
// Row and column order follow first appearance. Throws
// Error(kInvalidArgument) for an empty list.
std::string RenderReport(std::span<const MetricsReport> reports,
                         ReportFormat format);

}  // namespace irbench

#endif  // IRBENCH_REPORT_H_
