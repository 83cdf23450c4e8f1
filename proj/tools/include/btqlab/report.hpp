// Copyright 2026 The btq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BTQLAB_REPORT_HPP
#define BTQLAB_REPORT_HPP

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace btqlab {

enum class ReportFormat { Csv, Json };

/// Throws btq::Error(ConfigInvalid) for anything but "csv" or "json".
ReportFormat parse_format(std::string_view text);

struct ReportRow {
  std::string experiment;
  std::string model;
  int level = 0;
  std::string quantity;
  double value_re = 0.0;
  double value_im = 0.0;
  double error = 0.0;
  bool pass = true;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ReportSet {
  std::vector<ReportRow> rows;
  nlohmann::json config;
  double wall_time_seconds = 0.0;

  bool all_passed() const;
};

inline constexpr const char* kCsvHeader = "experiment,model,level,quantity,value_re,value_im,error,pass";
inline constexpr const char* kToolVersion = "0.1.0";

/// Header plus one line per row; reals printed with 17 significant digits.
std::string to_csv(const ReportSet& reports);
/// {"metadata": {config, tool_version, wall_time_seconds}, "rows": [...]}.
nlohmann::json to_json(const ReportSet& reports);
/// Inverse of to_json. Throws btq::Error(ConfigInvalid) on malformed input.
ReportSet from_json(const nlohmann::json& doc);

/// Writes the report; an empty path writes to standard output. Throws
/// btq::Error(IoError) when the file cannot be written.
void emit_report(const ReportSet& reports, ReportFormat format, const std::string& path);
/// Reads a JSON report written by emit_report.
ReportSet read_json_report(const std::string& path);

}  // namespace btqlab

#endif  // BTQLAB_REPORT_HPP
