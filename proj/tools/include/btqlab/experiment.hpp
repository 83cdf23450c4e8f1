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

#ifndef BTQLAB_EXPERIMENT_HPP
#define BTQLAB_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "btq/kahler_model.hpp"
#include "btqlab/report.hpp"

namespace btqlab {

/// Names accepted in the "experiments" list.
const std::vector<std::string>& experiment_names();

/// Pass/fail thresholds. Defaults are the CI gate values.
struct Thresholds {
  double slope_max = -0.9;
  double antisym_tol = 1e-3;
  double sass_slope_max = -1.9;
  double tuynman_tol = 1e-7;
  double epsilon_tol = 1e-10;
  double epsilon_integral_tol = 1e-8;
  double pullback_tol = 1e-6;
  double adjointness_tol = 1e-7;
  double contravariant_tol = 1e-7;
  double trace_tol = 1e-5;
};

struct ExperimentSpec {
  std::string name;
  /// Overrides the config-level list when non-empty.
  std::vector<std::string> observables;
  /// adjointness: operator factor lists; each list is multiplied in order.
  std::vector<std::vector<std::string>> operators;
  /// tuynman: candidate factors; empty means the signed default set.
  std::vector<double> candidates;
  std::optional<int> fit_order;
  /// Overrides the config-level levels when non-empty.
  std::vector<int> levels;
};

struct ExperimentConfig {
  btq::ModelKind kind = btq::ModelKind::Sphere;
  std::optional<btq::Complex> tau;
  /// Empty means the model's default level set.
  std::vector<int> levels;
  /// Quadrature resolution floor; 0 selects the per-level default.
  int resolution = 0;
  std::vector<std::string> observables;
  std::vector<ExperimentSpec> experiments;
  /// Base tolerance for the operator identities (Tuynman, adjointness,
  /// contravariant) unless a threshold overrides it.
  double tolerance = 1e-7;
  int fit_order = 3;
  int probes = 20;
  std::uint64_t seed = 1;
  std::string output_path;
  ReportFormat format = ReportFormat::Csv;
  Thresholds thresholds;
  /// The document the config was parsed from, echoed into JSON reports.
  nlohmann::json source;

  btq::KahlerModel model() const;
};

/// Throws btq::Error(ConfigInvalid) naming the offending field, e.g.
/// "experiments[0]" or "model.tau".
ExperimentConfig parse_config(const nlohmann::json& doc);
/// Reads and parses a config file. IoError when unreadable, ConfigInvalid
/// when it is not JSON.
ExperimentConfig load_config(const std::string& path);

/// Runs every experiment in config order. Rows are ordered by experiment,
/// then by ascending level (stable within a level). Module errors are
/// rethrown with their code and the experiment and level prefixed.
ReportSet run_experiment(const ExperimentConfig& config);

}  // namespace btqlab

#endif  // BTQLAB_EXPERIMENT_HPP
