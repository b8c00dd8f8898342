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


#include "irbench/report.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "irbench/error.h"
#include "synthetic.h"

namespace irbench {
namespace {

MetricsReport Row(std::string method, std::string dataset, double accuracy) {
  MetricsReport r;
  r.method = std::move(method);
  r.dataset = std::move(dataset);
  r.record_count = 500;
  r.accuracy = accuracy;
  return r;
}

TEST(Format, Rounding) {
  EXPECT_EQ(FormatPercent(0.552), "55.2");
  EXPECT_EQ(FormatPercent(0.7405), "74.1");
  EXPECT_EQ(FormatPercent(1.0), "100.0");
  EXPECT_EQ(FormatFraction(0.7894), "0.789");
  EXPECT_EQ(FormatFraction(232.0 / 304.0), "0.763");
  EXPECT_EQ(FormatFraction(0.0225), "0.023");
}

TEST(Report, AccuracyGrid) {
  const std::vector<MetricsReport> rows = {
      Row("COT", "GSM8K-SLC", 0.75), Row("COT", "GSMIR", 0.552),
      Row("COT+ATF", "GSMIR", 0.7)};
  const std::string md = RenderReport(rows, ReportFormat::kMarkdown);
  EXPECT_TRUE(md.starts_with(
      "## Accuracy (%)\n\n| Method | GSM8K-SLC | GSMIR |\n|---|---:|---:|\n"
      "| COT | 75.0 | 55.2 |\n| COT+ATF | - | 70.0 |\n"))
      << md;
  EXPECT_EQ(md.find("## Recognition"), std::string::npos);
  EXPECT_NE(md.find("### COT+ATF (GSMIR)\n\nRecords: 500\n"), std::string::npos);
  const std::string csv = RenderReport(rows, ReportFormat::kCsv);
  EXPECT_TRUE(csv.starts_with("method,GSM8K-SLC,GSMIR\nCOT,75.0,55.2\nCOT+ATF,-,70.0\n"))
      << csv;
  const auto json = nlohmann::json::parse(RenderReport(rows, ReportFormat::kJson));
  EXPECT_EQ(json["accuracy_percent"]["COT"]["GSMIR"], "55.2");
  EXPECT_EQ(json["reports"].size(), 3u);
}

TEST(Report, RecognitionTableShape) {
  MetricsReport r;
  r.method = "Identify-Ir-Prompt";
  r.dataset = "GSMIR";
  r.record_count = 500;
  r.recognition_breakdown = RecognitionBreakdown{500, {394, 11, 95}};
  const std::string md = RenderReport(std::vector<MetricsReport>{r}, ReportFormat::kMarkdown);
  EXPECT_NE(md.find("## Recognition breakdown\n\n"
                    "| Category | Identify-Ir-Prompt (GSMIR) |\n|---|---:|\n"
                    "| Irrelevant information | 0.788 |\n"
                    "| Other information | 0.022 |\n"
                    "| No irrelevant information | 0.190 |\n"),
            std::string::npos)
      << md;
  EXPECT_NE(md.find("| Identify-Ir-Prompt | n/a |"), std::string::npos)
      << "accuracy cell";
}

TEST(Report, AttributionAndWeakSections) {
  MetricsReport r = Row("COT", "GSMIR", 0.5);
  r.error_attribution = ErrorAttribution{304, 232};
  r.weak_irrelevance["SP"] = WeakIrrelevance{10, 4};
  r.weak_irrelevance["LTM"] = WeakIrrelevance{0, 0};
  r.identification_rate = 0.788;
  const std::string md = RenderReport(std::vector<MetricsReport>{r}, ReportFormat::kMarkdown);
  EXPECT_NE(md.find("| COT | GSMIR | 304 | 232 | 0.763 |"), std::string::npos) << md;
  EXPECT_NE(md.find("| COT | GSMIR | SP | 10 | 4 | 0.400 |"), std::string::npos);
  EXPECT_NE(md.find("| COT | GSMIR | LTM | 0 | 0 | n/a |"), std::string::npos);
  EXPECT_NE(md.find("| COT | GSMIR | 78.8 |"), std::string::npos);
}

TEST(Report, JsonRoundTrip) {
  MetricsReport r = Row("COT+ATF", "GSMIR", 0.7);
  r.recognition_breakdown = RecognitionBreakdown{3, {1, 1, 1}};
  r.error_attribution = ErrorAttribution{2, 1};
  r.weak_irrelevance["SP"] = WeakIrrelevance{4, 1};
  r.config_echo["seed"] = 7;
  r.config_echo["method"] = "atf";
  EXPECT_EQ(MetricsReportFromJson(nlohmann::ordered_json::parse(MetricsReportToJson(r).dump())), r);
  const auto path = std::filesystem::temp_directory_path() / "irbench_report.json";
  std::ofstream(path) << MetricsReportToJson(r).dump(2);
  EXPECT_EQ(LoadMetricsReport(path), r);
  std::ofstream(path) << R"({"method": 3})";
  EXPECT_THROW(LoadMetricsReport(path), Error);
  std::filesystem::remove(path);
}

TEST(Report, Errors) {
  EXPECT_THROW(RenderReport({}, ReportFormat::kMarkdown), Error);
  EXPECT_EQ(ParseReportFormat("md"), ReportFormat::kMarkdown);
  EXPECT_EQ(ParseReportFormat("csv"), ReportFormat::kCsv);
  EXPECT_THROW(ParseReportFormat("html"), Error);
}

TEST(Report, CsvQuotesFields) {
  const std::string csv =
      RenderReport(std::vector<MetricsReport>{Row("A,B", "x\"y", 0.1)}, ReportFormat::kCsv);
  EXPECT_TRUE(csv.starts_with("method,\"x\"\"y\"\n\"A,B\",10.0\n")) << csv;
}

}  // namespace
}  // namespace irbench
