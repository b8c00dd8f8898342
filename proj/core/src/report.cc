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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "irbench/error.h"

namespace irbench {
namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kCategoryLabels[] = {
    "Irrelevant information", "Other information",
    "No irrelevant information"};
constexpr const char* kCategoryKeys[] = {"irrelevant_correct",
                                         "other_information", "no_irrelevant"};

template <typename T>
ojson OptionalJson(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

std::optional<double> OptionalDouble(const ojson& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

std::string Cell(const std::optional<double>& v, bool percent) {
  if (!v) return "n/a";
  return percent ? FormatPercent(*v) : FormatFraction(*v);
}

std::string Column(const MetricsReport& r) {
  return r.method + " (" + r.dataset + ")";
}

template <typename T>
void AddUnique(std::vector<T>& list, const T& value) {
  for (const T& v : list) {
    if (v == value) return;
  }
  list.push_back(value);
}

struct Grid {
  std::vector<std::string> methods;
  std::vector<std::string> datasets;
  std::map<std::pair<std::string, std::string>, std::optional<double>> cells;

  explicit Grid(std::span<const MetricsReport> reports) {
    for (const auto& r : reports) {
      AddUnique(methods, r.method);
      AddUnique(datasets, r.dataset);
      cells[{r.method, r.dataset}] = r.accuracy;
    }
  }

  std::string At(const std::string& m, const std::string& d) const {
    auto it = cells.find({m, d});
    if (it == cells.end()) return "-";
    return Cell(it->second, true);
  }
};

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string RenderMarkdown(std::span<const MetricsReport> reports) {
  std::ostringstream out;
  const Grid grid(reports);
  out << "## Accuracy (%)\n\n| Method |";
  for (const auto& d : grid.datasets) out << " " << d << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < grid.datasets.size(); ++i) out << "---:|";
  out << "\n";
  for (const auto& m : grid.methods) {
    out << "| " << m << " |";
    for (const auto& d : grid.datasets) out << " " << grid.At(m, d) << " |";
    out << "\n";
  }

  bool any = false;
  for (const auto& r : reports) any |= r.identification_rate.has_value();
  if (any) {
    out << "\n## Identification rate (%)\n\n| Method | Dataset | Rate |\n"
           "|---|---|---:|\n";
    for (const auto& r : reports) {
      if (!r.identification_rate) continue;
      out << "| " << r.method << " | " << r.dataset << " | "
          << FormatPercent(*r.identification_rate) << " |\n";
    }
  }

  std::vector<const MetricsReport*> with_breakdown;
  for (const auto& r : reports) {
    if (r.recognition_breakdown) with_breakdown.push_back(&r);
  }
  if (!with_breakdown.empty()) {
    out << "\n## Recognition breakdown\n\n| Category |";
    for (const auto* r : with_breakdown) out << " " << Column(*r) << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < with_breakdown.size(); ++i) out << "---:|";
    out << "\n";
    for (std::size_t c = 0; c < 3; ++c) {
      out << "| " << kCategoryLabels[c] << " |";
      for (const auto* r : with_breakdown) {
        out << " " << FormatFraction(r->recognition_breakdown->Fraction(c))
            << " |";
      }
      out << "\n";
    }
  }

  any = false;
  for (const auto& r : reports) any |= r.error_attribution.has_value();
  if (any) {
    out << "\n## Error attribution\n\n"
           "| Method | Dataset | Wrong only when perturbed | Identified | "
           "Fraction |\n|---|---|---:|---:|---:|\n";
    for (const auto& r : reports) {
      if (!r.error_attribution) continue;
      const auto& e = *r.error_attribution;
      out << "| " << r.method << " | " << r.dataset << " | "
          << e.errors_on_perturbed_only << " | " << e.identified_among_errors
          << " | " << Cell(e.fraction(), false) << " |\n";
    }
  }

  any = false;
  for (const auto& r : reports) any |= !r.weak_irrelevance.empty();
  if (any) {
    out << "\n## Weak irrelevance\n\n"
           "| Method | Dataset | Downstream | Unrecognized | Weak | "
           "Proportion |\n|---|---|---|---:|---:|---:|\n";
    for (const auto& r : reports) {
      for (const auto& [label, w] : r.weak_irrelevance) {
        out << "| " << r.method << " | " << r.dataset << " | " << label
            << " | " << w.unrecognized << " | " << w.weak << " | "
            << Cell(w.proportion(), false) << " |\n";
      }
    }
  }

  out << "\n## Configuration\n";
  for (const auto& r : reports) {
    out << "\n### " << Column(r) << "\n\nRecords: " << r.record_count
        << "\n\n```json\n" << r.config_echo.dump(2) << "\n```\n";
  }
  return out.str();
}

std::string RenderCsv(std::span<const MetricsReport> reports) {
  std::ostringstream out;
  const Grid grid(reports);
  out << "method";
  for (const auto& d : grid.datasets) out << "," << CsvField(d);
  out << "\n";
  for (const auto& m : grid.methods) {
    out << CsvField(m);
    for (const auto& d : grid.datasets) out << "," << grid.At(m, d);
    out << "\n";
  }
  out << "\nmethod,dataset,records,accuracy,identification_rate,"
         "irrelevant_correct,other_information,no_irrelevant,"
         "errors_on_perturbed_only,identified_among_errors,"
         "attribution_fraction\n";
  for (const auto& r : reports) {
    out << CsvField(r.method) << "," << CsvField(r.dataset) << ","
        << r.record_count << "," << Cell(r.accuracy, true) << ","
        << Cell(r.identification_rate, true);
    for (std::size_t c = 0; c < 3; ++c) {
      out << ","
          << (r.recognition_breakdown
                  ? FormatFraction(r.recognition_breakdown->Fraction(c))
                  : std::string("n/a"));
    }
    if (r.error_attribution) {
      out << "," << r.error_attribution->errors_on_perturbed_only << ","
          << r.error_attribution->identified_among_errors << ","
          << Cell(r.error_attribution->fraction(), false);
    } else {
      out << ",n/a,n/a,n/a";
    }
    out << "\n";
  }
  return out.str();
}

std::string RenderJson(std::span<const MetricsReport> reports) {
  const Grid grid(reports);
  ojson j;
  ojson table = ojson::object();
  for (const auto& m : grid.methods) {
    ojson row = ojson::object();
    for (const auto& d : grid.datasets) row[d] = grid.At(m, d);
    table[m] = std::move(row);
  }
  j["accuracy_percent"] = std::move(table);
  j["reports"] = ojson::array();
  for (const auto& r : reports) j["reports"].push_back(MetricsReportToJson(r));
  return j.dump(2) + "\n";
}

}  // namespace

ojson MetricsReportToJson(const MetricsReport& r) {
  ojson j;
  j["method"] = r.method;
  j["dataset"] = r.dataset;
  j["record_count"] = r.record_count;
  j["accuracy"] = OptionalJson(r.accuracy);
  j["identification_rate"] = OptionalJson(r.identification_rate);
  if (r.recognition_breakdown) {
    ojson b;
    b["total"] = r.recognition_breakdown->total;
    for (std::size_t c = 0; c < 3; ++c) {
      b[kCategoryKeys[c]] = r.recognition_breakdown->counts[c];
    }
    j["recognition_breakdown"] = std::move(b);
  } else {
    j["recognition_breakdown"] = nullptr;
  }
  if (r.error_attribution) {
    ojson e;
    e["errors_on_perturbed_only"] = r.error_attribution->errors_on_perturbed_only;
    e["identified_among_errors"] = r.error_attribution->identified_among_errors;
    e["fraction"] = OptionalJson(r.error_attribution->fraction());
    j["error_attribution"] = std::move(e);
  } else {
    j["error_attribution"] = nullptr;
  }
  ojson weak = ojson::object();
  for (const auto& [label, w] : r.weak_irrelevance) {
    ojson x;
    x["unrecognized"] = w.unrecognized;
    x["weak"] = w.weak;
    x["proportion"] = OptionalJson(w.proportion());
    weak[label] = std::move(x);
  }
  j["weak_irrelevance"] = std::move(weak);
  j["config"] = r.config_echo;
  return j;
}

MetricsReport MetricsReportFromJson(const ojson& j) {
  MetricsReport r;
  try {
    r.method = j.at("method").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.record_count = j.at("record_count").get<std::size_t>();
    r.accuracy = OptionalDouble(j, "accuracy");
    r.identification_rate = OptionalDouble(j, "identification_rate");
    if (j.contains("recognition_breakdown") &&
        !j["recognition_breakdown"].is_null()) {
      const auto& b = j["recognition_breakdown"];
      RecognitionBreakdown rb;
      rb.total = b.at("total").get<std::size_t>();
      for (std::size_t c = 0; c < 3; ++c) {
        rb.counts[c] = b.at(kCategoryKeys[c]).get<std::size_t>();
      }
      r.recognition_breakdown = rb;
    }
    if (j.contains("error_attribution") && !j["error_attribution"].is_null()) {
      const auto& e = j["error_attribution"];
      r.error_attribution = ErrorAttribution{
          e.at("errors_on_perturbed_only").get<std::size_t>(),
          e.at("identified_among_errors").get<std::size_t>()};
    }
    if (j.contains("weak_irrelevance")) {
      for (const auto& [label, w] : j["weak_irrelevance"].items()) {
        r.weak_irrelevance[label] =
            WeakIrrelevance{w.at("unrecognized").get<std::size_t>(),
                            w.at("weak").get<std::size_t>()};
      }
    }
    if (j.contains("config")) r.config_echo = j["config"];
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed metrics report: ") +
                                       e.what());
  }
  return r;
}

MetricsReport LoadMetricsReport(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return MetricsReportFromJson(ojson::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "md" || name == "markdown") return ReportFormat::kMarkdown;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown report format '" + std::string(name) + "'");
}

std::string FormatPercent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", fraction * 100.0 + 1e-9);
  return buf;
}

std::string FormatFraction(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", fraction + 1e-12);
  return buf;
}

std::string RenderReport(std::span<const MetricsReport> reports,
                         ReportFormat format) {
  if (reports.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no reports to render");
  }
  switch (format) {
    case ReportFormat::kMarkdown:
      return RenderMarkdown(reports);
    case ReportFormat::kCsv:
      return RenderCsv(reports);
    case ReportFormat::kJson:
      return RenderJson(reports);
  }
  return RenderMarkdown(reports);
}

}  // namespace irbench
