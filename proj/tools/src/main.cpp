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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "btq/error.hpp"
#include "btqlab/experiment.hpp"
#include "btqlab/report.hpp"

// Exit status: 0 when every check passes, 1 when any check fails, 2 on
// configuration, I/O or numerical errors.
int main(int argc, char** argv) {
  CLI::App app{"btqlab: Berezin-Toeplitz quantization experiments"};
  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  app.add_option("--config", config_path, "Experiment config (JSON)")->required();
  app.add_option("--out", out_path, "Report path; overrides output.path");
  app.add_option("--format", format, "Report format; overrides output.format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "Probe sampling seed; overrides seed");
  app.add_flag("--verbose", verbose, "Print a run summary to stderr");
  CLI11_PARSE(app, argc, argv);

  try {
    btqlab::ExperimentConfig cfg = btqlab::load_config(config_path);
    if (seed) {
      cfg.seed = *seed;
      cfg.source["seed"] = *seed;
    }
    if (!out_path.empty()) cfg.output_path = out_path;
    if (!format.empty()) cfg.format = btqlab::parse_format(format);

    const btqlab::ReportSet reports = btqlab::run_experiment(cfg);
    btqlab::emit_report(reports, cfg.format, cfg.output_path);

    size_t failed = 0;
    for (const auto& r : reports.rows) {
      if (r.pass) continue;
      ++failed;
      if (verbose) {
        std::fprintf(stderr, "FAIL %s level %d %s value %.6g bound %.6g\n", r.experiment.c_str(), r.level,
                     r.quantity.c_str(), r.value_re, r.error);
      }
    }
    if (verbose) {
      std::fprintf(stderr, "%s: %zu rows, %zu failed, %.2f s\n", cfg.model().name().c_str(), reports.rows.size(),
                   failed, reports.wall_time_seconds);
    }
    return failed == 0 ? 0 : 1;
  } catch (const btq::Error& e) {
    std::cerr << "btqlab: " << e.what() << "\n";
    return 2;
  }
}
