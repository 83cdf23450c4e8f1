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

#ifndef BTQ_KAHLER_MODEL_HPP
#define BTQ_KAHLER_MODEL_HPP

#include <optional>
#include <string>
#include <utility>

#include "btq/types.hpp"

namespace btq {

enum class ModelKind { Sphere, Torus };

/// A compact Kähler curve given on one chart: the Riemann sphere in the
/// affine coordinate z, or the torus C/(Z + tau Z) on its covering plane.
///
/// The Kähler form is omega = i g(z) dz ^ dzbar and the quantum line bundle
/// has local metric weight h(z) with i dbar d log h = omega. Both models
/// have volume 2 pi for the Liouville measure Omega = omega.
class KahlerModel {
 public:
  static KahlerModel sphere();
  /// Throws InvalidModulus unless Im(tau) > 0.
  static KahlerModel torus(Complex tau);

  ModelKind kind() const noexcept { return kind_; }
  bool is_sphere() const noexcept { return kind_ == ModelKind::Sphere; }
  bool is_torus() const noexcept { return kind_ == ModelKind::Torus; }
  Complex tau() const noexcept { return tau_; }

  double kahler_density(Complex z) const;
  double metric_weight(Complex z) const;
  double log_metric_weight(Complex z) const;
  /// d/dz log h.
  Complex d_log_metric_weight(Complex z) const;
  double volume() const noexcept { return 2.0 * kPi; }

  /// Torus: lattice coordinates (x, y) with z = x + tau y. Sphere: (Re z, Im z).
  std::pair<double, double> lattice_coords(Complex z) const;
  Complex from_lattice(double x, double y) const;
  /// Torus points are moved into x, y in [0, 1); sphere points are unchanged.
  ChartPoint reduce(ChartPoint p) const;

  std::string name() const;

  friend bool operator==(const KahlerModel&, const KahlerModel&) = default;

 private:
  KahlerModel(ModelKind kind, Complex tau) : kind_(kind), tau_(tau) {}

  ModelKind kind_;
  Complex tau_;
};

KahlerModel make_model(ModelKind kind, std::optional<Complex> tau = std::nullopt);

/// Relative deviation max |i dbar d log h - omega| / |omega| over `samples`
/// chart points, with the mixed derivative taken by central differences.
double quantum_condition_defect(const KahlerModel& model, int samples = 100,
                                unsigned seed = 7);

}  // namespace btq

#endif  // BTQ_KAHLER_MODEL_HPP
