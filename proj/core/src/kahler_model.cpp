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

#include "btq/kahler_model.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "btq/error.hpp"

namespace btq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidModulus: return "InvalidModulus";
    case ErrorCode::UnderResolved: return "UnderResolved";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::UnknownSelector: return "UnknownSelector";
    case ErrorCode::LevelInvalid: return "LevelInvalid";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OracleMissing: return "OracleMissing";
    case ErrorCode::KernelZero: return "KernelZero";
    case ErrorCode::NonFiniteLog: return "NonFiniteLog";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

KahlerModel KahlerModel::sphere() { return KahlerModel(ModelKind::Sphere, Complex{}); }

KahlerModel KahlerModel::torus(Complex tau) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real())) {
    throw Error(ErrorCode::InvalidModulus, "torus modulus needs Im(tau) > 0");
  }
  return KahlerModel(ModelKind::Torus, tau);
}

KahlerModel make_model(ModelKind kind, std::optional<Complex> tau) {
  if (kind == ModelKind::Sphere) return KahlerModel::sphere();
  if (!tau) throw Error(ErrorCode::InvalidModulus, "torus model requires tau");
  return KahlerModel::torus(*tau);
}

double KahlerModel::kahler_density(Complex z) const {
  if (is_sphere()) {
    const double s = 1.0 + std::norm(z);
    return 1.0 / (s * s);
  }
  return kPi / tau_.imag();
}

double KahlerModel::log_metric_weight(Complex z) const {
  if (is_sphere()) return -std::log1p(std::norm(z));
  return -2.0 * kPi * z.imag() * z.imag() / tau_.imag();
}

double KahlerModel::metric_weight(Complex z) const { return std::exp(log_metric_weight(z)); }

Complex KahlerModel::d_log_metric_weight(Complex z) const {
  if (is_sphere()) return -std::conj(z) / (1.0 + std::norm(z));
  return 2.0 * kPi * kI * (z.imag() / tau_.imag());
}

std::pair<double, double> KahlerModel::lattice_coords(Complex z) const {
  if (is_sphere()) return {z.real(), z.imag()};
  const double y = z.imag() / tau_.imag();
  return {z.real() - tau_.real() * y, y};
}

Complex KahlerModel::from_lattice(double x, double y) const {
  if (is_sphere()) return {x, y};
  return Complex{x, 0.0} + tau_ * y;
}

ChartPoint KahlerModel::reduce(ChartPoint p) const {
  if (is_sphere()) return p;
  auto [x, y] = lattice_coords(p.z);
  x -= std::floor(x);
  y -= std::floor(y);
  // floor can round a tiny negative up to exactly 1.
  if (x >= 1.0) x = 0.0;
  if (y >= 1.0) y = 0.0;
  return {from_lattice(x, y)};
}

std::string KahlerModel::name() const {
  if (is_sphere()) return "sphere";
  char buf[96];
  std::snprintf(buf, sizeof buf, "torus(%.17g%+.17gi)", tau_.real(), tau_.imag());
  return buf;
}

double quantum_condition_defect(const KahlerModel& model, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double h = 1e-3;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Complex z;
    if (model.is_sphere()) {
      const double r = 2.0 * unit(rng);
      z = std::polar(r, 2.0 * kPi * unit(rng));
    } else {
      z = model.from_lattice(unit(rng), unit(rng));
    }
    // d dbar = (1/4)(d_xx + d_yy); the quantum condition reads g = -d dbar log h.
    auto lh = [&](double dx, double dy) { return model.log_metric_weight(z + Complex{dx, dy}); };
    const double lap = (lh(h, 0) + lh(-h, 0) + lh(0, h) + lh(0, -h) - 4.0 * lh(0, 0)) / (h * h);
    const double g = model.kahler_density(z);
    worst = std::max(worst, std::abs(-0.25 * lap - g) / g);
  }
  return worst;
}

}  // namespace btq
