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

#include "btqlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <set>

#include "btq/error.hpp"
#include "btq/level_store.hpp"
#include "btq/observable.hpp"
#include "btq/semiclassic.hpp"

namespace btqlab {

namespace {

using btq::Error;
using btq::ErrorCode;
using nlohmann::json;

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigInvalid, field + ": " + what);
}

// Minimum number of observables each experiment consumes.
const std::map<std::string, size_t>& arities() {
  static const std::map<std::string, size_t> table = {
      {"norm", {1}},         {"dirac", {2}},       {"product", {2}},       {"star_c1", {2}},
      {"trace", {1}},        {"berezin", {1}},     {"epsilon", {0}},       {"tuynman", {1}},
      {"surjectivity", {0}}, {"pullback", {0}},    {"adjointness", {1}},   {"contravariant", {1}},
  };
  return table;
}

double number_in(const json& v, const std::string& field) {
  if (!v.is_number()) invalid(field, "expected a number");
  return v.get<double>();
}

int int_in(const json& v, const std::string& field) {
  if (!v.is_number_integer()) invalid(field, "expected an integer");
  return v.get<int>();
}

std::vector<std::string> strings_in(const json& v, const std::string& field) {
  if (!v.is_array()) invalid(field, "expected an array of strings");
  std::vector<std::string> out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) invalid(field + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

std::vector<int> levels_in(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) invalid(field, "expected a nonempty array of levels");
  std::vector<int> out;
  for (size_t i = 0; i < v.size(); ++i) {
    const int m = int_in(v[i], field + "[" + std::to_string(i) + "]");
    if (m < 1) invalid(field + "[" + std::to_string(i) + "]", "levels must be positive");
    if (!out.empty() && m <= out.back()) invalid(field, "levels must be strictly ascending");
    out.push_back(m);
  }
  return out;
}

void check_keys(const json& obj, const std::string& prefix, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      invalid(prefix.empty() ? key : prefix + "." + key, "unknown field");
    }
  }
}

void validate_observables(const btq::KahlerModel& model, const std::vector<std::string>& texts,
                          const std::string& field) {
  for (size_t i = 0; i < texts.size(); ++i) {
    try {
      btq::parse_observable(model, texts[i]);
    } catch (const Error& e) {
      invalid(field + "[" + std::to_string(i) + "]", e.what());
    }
  }
}

ExperimentSpec parse_experiment(const json& v, const std::string& field, const btq::KahlerModel& model) {
  ExperimentSpec spec;
  if (v.is_string()) {
    spec.name = v.get<std::string>();
  } else if (v.is_object()) {
    check_keys(v, field, {"name", "observables", "operators", "candidates", "fit_order", "levels"});
    if (!v.contains("name") || !v["name"].is_string()) invalid(field + ".name", "expected a string");
    spec.name = v["name"].get<std::string>();
    if (v.contains("observables")) {
      spec.observables = strings_in(v["observables"], field + ".observables");
      validate_observables(model, spec.observables, field + ".observables");
    }
    if (v.contains("operators")) {
      const json& ops = v["operators"];
      if (!ops.is_array()) invalid(field + ".operators", "expected an array of factor lists");
      for (size_t i = 0; i < ops.size(); ++i) {
        const std::string f = field + ".operators[" + std::to_string(i) + "]";
        spec.operators.push_back(strings_in(ops[i], f));
        if (spec.operators.back().empty()) invalid(f, "empty factor list");
        validate_observables(model, spec.operators.back(), f);
      }
    }
    if (v.contains("candidates")) {
      const json& c = v["candidates"];
      if (!c.is_array() || c.empty()) invalid(field + ".candidates", "expected a nonempty array");
      for (size_t i = 0; i < c.size(); ++i) {
        spec.candidates.push_back(number_in(c[i], field + ".candidates[" + std::to_string(i) + "]"));
      }
    }
    if (v.contains("fit_order")) {
      spec.fit_order = int_in(v["fit_order"], field + ".fit_order");
      if (*spec.fit_order < 1) invalid(field + ".fit_order", "must be at least 1");
    }
    if (v.contains("levels")) spec.levels = levels_in(v["levels"], field + ".levels");
  } else {
    invalid(field, "expected an experiment name or object");
  }
  if (!arities().count(spec.name)) invalid(field, "unknown experiment '" + spec.name + "'");
  return spec;
}

ReportFormat format_in(const json& v, const std::string& field) {
  if (!v.is_string()) invalid(field, "expected csv or json");
  try {
    return parse_format(v.get<std::string>());
  } catch (const Error&) {
    invalid(field, "expected csv or json");
  }
}

struct Context {
  const ExperimentConfig& config;
  btq::KahlerModel model;
  btq::LevelStore store;
  std::vector<btq::ChartPoint> probes;
};

std::vector<btq::Observable> parse_all(const btq::KahlerModel& model, const std::vector<std::string>& texts) {
  std::vector<btq::Observable> out;
  for (const auto& t : texts) out.push_back(btq::parse_observable(model, t));
  return out;
}

void append_rows(ReportSet& out, const std::string& experiment, const btq::KahlerModel& model,
                 const btq::CheckReport& rep) {
  const std::string prefix = rep.subject.empty() ? std::string() : rep.subject + ":";
  for (const auto& e : rep.entries) {
    out.rows.push_back({experiment, model.name(), e.level, prefix + e.quantity, e.value.real(), e.value.imag(),
                        e.error, e.pass});
  }
}

void run_one(const ExperimentSpec& spec, Context& ctx, const std::vector<int>& levels, ReportSet& out) {
  const ExperimentConfig& cfg = ctx.config;
  const Thresholds& th = cfg.thresholds;
  const std::vector<std::string>& texts = spec.observables.empty() ? cfg.observables : spec.observables;
  const std::vector<btq::Observable> obs = parse_all(ctx.model, texts);
  const int fit_order = spec.fit_order.value_or(cfg.fit_order);
  const std::string& name = spec.name;
  auto emit = [&](const btq::CheckReport& rep) { append_rows(out, name, ctx.model, rep); };

  if (name == "norm") {
    for (const auto& f : obs) {
      emit(btq::check_norm_limit(ctx.store, f, levels, fit_order));
      emit(btq::check_norm_chain(ctx.store, f, levels));
    }
  } else if (name == "dirac") {
    emit(btq::check_dirac(ctx.store, obs[0], obs[1], levels, th.slope_max));
  } else if (name == "product") {
    emit(btq::check_product(ctx.store, obs, levels, th.slope_max));
  } else if (name == "star_c1") {
    emit(btq::extract_c1(ctx.store, obs[0], obs[1], levels, ctx.probes, fit_order, th.antisym_tol,
                         th.sass_slope_max)
             .report);
  } else if (name == "trace") {
    for (const auto& f : obs) emit(btq::check_trace_expansion(ctx.store, f, levels, fit_order, th.trace_tol));
  } else if (name == "berezin") {
    for (const auto& f : obs) emit(btq::check_berezin_expansion(ctx.store, f, levels, ctx.probes, fit_order));
  } else if (name == "epsilon") {
    emit(btq::check_epsilon(ctx.store, levels, ctx.probes, th.epsilon_tol, th.epsilon_integral_tol));
  } else if (name == "tuynman") {
    const auto candidates = spec.candidates.empty() ? btq::tuynman_signed_candidates() : spec.candidates;
    emit(btq::check_tuynman(ctx.store, obs, levels, candidates, th.tuynman_tol).report);
  } else if (name == "surjectivity") {
    std::string subject = "harmonics";
    if (!spec.observables.empty()) {
      subject.clear();
      for (size_t i = 0; i < texts.size(); ++i) subject += (i ? ";" : "") + texts[i];
    }
    for (int m : levels) {
      const auto family = spec.observables.empty() ? btq::harmonic_family(ctx.model, m) : obs;
      btq::CheckReport rep{"surjectivity", subject, {}, std::nullopt, {}};
      try {
        const auto s = btq::surjectivity_rank(ctx.store, m, family, cfg.seed);
        rep.entries.push_back({m, "rank", double(s.rank), double(s.expected), true});
        rep.entries.push_back({m, "hermitian_residual", s.hermitian_residual, 1e-8, s.hermitian_residual <= 1e-8});
      } catch (const btq::RankDeficientError& e) {
        rep.entries.push_back({m, "rank", double(e.rank()), double(e.expected()), false});
      }
      emit(rep);
    }
  } else if (name == "pullback") {
    emit(btq::check_pullback(ctx.store, levels, ctx.probes, th.pullback_tol));
  } else if (name == "adjointness") {
    std::vector<std::vector<btq::Observable>> ops;
    if (spec.operators.empty()) {
      for (const auto& f : obs) ops.push_back({f});
    } else {
      for (const auto& factors : spec.operators) ops.push_back(parse_all(ctx.model, factors));
    }
    emit(btq::check_adjointness(ctx.store, ops, obs, levels, th.adjointness_tol));
  } else if (name == "contravariant") {
    emit(btq::check_contravariant(ctx.store, obs, levels, th.contravariant_tol));
  }
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"norm",    "dirac",        "product",  "star_c1",
                                                 "trace",   "berezin",      "epsilon",  "tuynman",
                                                 "surjectivity", "pullback", "adjointness", "contravariant"};
  return names;
}

btq::KahlerModel ExperimentConfig::model() const { return btq::make_model(kind, tau); }

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) invalid("config", "expected a JSON object");
  check_keys(doc, "", {"model", "levels", "resolution", "observables", "experiments", "tolerance", "fit_order",
                       "probes", "seed", "output", "thresholds"});
  ExperimentConfig cfg;
  cfg.source = doc;

  if (!doc.contains("model") || !doc["model"].is_object()) invalid("model", "expected an object");
  const json& model = doc["model"];
  check_keys(model, "model", {"kind", "tau"});
  const std::string kind = model.value("kind", std::string());
  if (kind == "sphere") {
    cfg.kind = btq::ModelKind::Sphere;
  } else if (kind == "torus") {
    cfg.kind = btq::ModelKind::Torus;
    if (!model.contains("tau")) invalid("model.tau", "required for the torus");
    const json& t = model["tau"];
    if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number()) {
      invalid("model.tau", "expected [re, im]");
    }
    cfg.tau = btq::Complex(t[0].get<double>(), t[1].get<double>());
    if (!(cfg.tau->imag() > 0.0)) invalid("model.tau", "imaginary part must be positive");
  } else {
    invalid("model.kind", "expected sphere or torus");
  }
  const btq::KahlerModel m = cfg.model();

  if (doc.contains("levels")) cfg.levels = levels_in(doc["levels"], "levels");
  if (doc.contains("resolution")) {
    cfg.resolution = int_in(doc["resolution"], "resolution");
    if (cfg.resolution < 0) invalid("resolution", "must be non-negative");
  }
  if (doc.contains("observables")) {
    cfg.observables = strings_in(doc["observables"], "observables");
    validate_observables(m, cfg.observables, "observables");
  }
  if (!doc.contains("experiments") || !doc["experiments"].is_array() || doc["experiments"].empty()) {
    invalid("experiments", "expected a nonempty array");
  }
  for (size_t i = 0; i < doc["experiments"].size(); ++i) {
    const std::string field = "experiments[" + std::to_string(i) + "]";
    ExperimentSpec spec = parse_experiment(doc["experiments"][i], field, m);
    const size_t have = spec.observables.empty() ? cfg.observables.size() : spec.observables.size();
    if (have < arities().at(spec.name)) {
      invalid(field + ".observables", "'" + spec.name + "' needs at least " +
                                          std::to_string(arities().at(spec.name)) + " observables");
    }
    cfg.experiments.push_back(std::move(spec));
  }
  if (doc.contains("tolerance")) {
    cfg.tolerance = number_in(doc["tolerance"], "tolerance");
    if (!(cfg.tolerance > 0.0 && cfg.tolerance < 1.0)) invalid("tolerance", "must lie in (0, 1)");
  }
  cfg.thresholds.tuynman_tol = cfg.thresholds.adjointness_tol = cfg.thresholds.contravariant_tol = cfg.tolerance;
  if (doc.contains("fit_order")) {
    cfg.fit_order = int_in(doc["fit_order"], "fit_order");
    if (cfg.fit_order < 1) invalid("fit_order", "must be at least 1");
  }
  if (doc.contains("probes")) {
    cfg.probes = int_in(doc["probes"], "probes");
    if (cfg.probes < 1) invalid("probes", "must be at least 1");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) invalid("seed", "expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    if (!o.is_object()) invalid("output", "expected an object");
    check_keys(o, "output", {"path", "format"});
    if (o.contains("path")) {
      if (!o["path"].is_string()) invalid("output.path", "expected a string");
      cfg.output_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) cfg.format = format_in(o["format"], "output.format");
  }
  if (doc.contains("thresholds")) {
    const json& t = doc["thresholds"];
    if (!t.is_object()) invalid("thresholds", "expected an object");
    Thresholds& th = cfg.thresholds;
    const std::map<std::string, double*> slots = {
        {"slope_max", &th.slope_max},
        {"antisym_tol", &th.antisym_tol},
        {"sass_slope_max", &th.sass_slope_max},
        {"tuynman_tol", &th.tuynman_tol},
        {"epsilon_tol", &th.epsilon_tol},
        {"epsilon_integral_tol", &th.epsilon_integral_tol},
        {"pullback_tol", &th.pullback_tol},
        {"adjointness_tol", &th.adjointness_tol},
        {"contravariant_tol", &th.contravariant_tol},
        {"trace_tol", &th.trace_tol},
    };
    for (const auto& [key, value] : t.items()) {
      const auto it = slots.find(key);
      if (it == slots.end()) invalid("thresholds." + key, "unknown field");
      *it->second = number_in(value, "thresholds." + key);
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(file);
  } catch (const json::parse_error& e) {
    invalid("config", e.what());
  }
  return parse_config(doc);
}

ReportSet run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const btq::KahlerModel model = config.model();
  Context ctx{config, model, btq::LevelStore(model, config.resolution),
              btq::sample_probes(model, config.probes, config.seed)};
  const std::vector<int> base_levels = config.levels.empty() ? btq::default_levels(model) : config.levels;

  ReportSet out;
  out.config = config.source;
  for (size_t i = 0; i < config.experiments.size(); ++i) {
    const ExperimentSpec& spec = config.experiments[i];
    const std::string where = "experiments[" + std::to_string(i) + "] (" + spec.name + ")";
    // Surjectivity stacks a full harmonic family per level and defaults to small levels.
    const std::vector<int> levels = !spec.levels.empty()         ? spec.levels
                                    : spec.name == "surjectivity" ? std::vector<int>{1, 2, 3}
                                                                  : base_levels;
    for (int m : levels) {
      try {
        ctx.store.get(m);
      } catch (const Error& e) {
        throw Error(e.code(), where + " level " + std::to_string(m) + ": " + e.what());
      }
    }
    const size_t first = out.rows.size();
    try {
      run_one(spec, ctx, levels, out);
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
    std::stable_sort(out.rows.begin() + static_cast<std::ptrdiff_t>(first), out.rows.end(),
                     [](const ReportRow& a, const ReportRow& b) { return a.level < b.level; });
  }
  out.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace btqlab
