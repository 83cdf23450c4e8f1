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

#include "btqlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "btq/error.hpp"

namespace btqlab {

namespace {

using btq::Error;
using btq::ErrorCode;

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ReportFormat parse_format(std::string_view text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  throw Error(ErrorCode::ConfigInvalid, "output.format: expected csv or json, got '" + std::string(text) + "'");
}

bool ReportSet::all_passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

std::string to_csv(const ReportSet& reports) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : reports.rows) {
    out += csv_field(r.experiment) + ',' + csv_field(r.model) + ',' + std::to_string(r.level) + ',' +
           csv_field(r.quantity) + ',' + real_text(r.value_re) + ',' + real_text(r.value_im) + ',' +
           real_text(r.error) + ',' + (r.pass ? "true" : "false") + '\n';
  }
  return out;
}

nlohmann::json to_json(const ReportSet& reports) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports.rows) {
    rows.push_back({{"experiment", r.experiment},
                    {"model", r.model},
                    {"level", r.level},
                    {"quantity", r.quantity},
                    {"value_re", r.value_re},
                    {"value_im", r.value_im},
                    {"error", r.error},
                    {"pass", r.pass}});
  }
  return {{"metadata",
           {{"config", reports.config}, {"tool_version", kToolVersion}, {"wall_time_seconds", reports.wall_time_seconds}}},
          {"rows", rows}};
}

ReportSet from_json(const nlohmann::json& doc) {
  ReportSet out;
  try {
    const auto& meta = doc.at("metadata");
    out.config = meta.value("config", nlohmann::json());
    out.wall_time_seconds = meta.value("wall_time_seconds", 0.0);
    for (const auto& r : doc.at("rows")) {
      out.rows.push_back({r.at("experiment").get<std::string>(), r.at("model").get<std::string>(),
                          r.at("level").get<int>(), r.at("quantity").get<std::string>(),
                          r.at("value_re").get<double>(), r.at("value_im").get<double>(),
                          r.at("error").get<double>(), r.at("pass").get<bool>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("report: ") + e.what());
  }
  return out;
}

void emit_report(const ReportSet& reports, ReportFormat format, const std::string& path) {
  const std::string text = format == ReportFormat::Csv ? to_csv(reports) : to_json(reports).dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

ReportSet read_json_report(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  try {
    return from_json(nlohmann::json::parse(file));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("report: ") + e.what());
  }
}

}  // namespace btqlab
