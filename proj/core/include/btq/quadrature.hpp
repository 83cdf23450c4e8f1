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

#ifndef BTQ_QUADRATURE_HPP
#define BTQ_QUADRATURE_HPP

#include <array>
#include <functional>
#include <vector>

#include "btq/kahler_model.hpp"
#include "btq/types.hpp"

namespace btq {

/// Discrete Liouville measure on a model.
///
/// Sphere nodes are a tensor grid in (u, phi) with u = |z|^2 / (1 + |z|^2):
/// Gauss-Legendre in u on (0, 1), uniform in phi. In these variables
/// Omega = du dphi. Torus nodes are a uniform grid in the lattice coordinates
/// (x, y) on [0, 1)^2, where Omega = 2 pi dx dy.
struct QuadratureRule {
  ModelKind kind = ModelKind::Sphere;
  std::vector<ChartPoint> nodes;
  std::vector<double> weights;
  /// (u, phi) on the sphere, (x, y) on the torus.
  std::vector<std::array<double, 2>> params;
  int resolution = 0;
  double tolerance = 1e-10;

  size_t size() const noexcept { return nodes.size(); }
  double weight_sum() const;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on (0, 1).
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Throws UnderResolved when resolution < 8 or the self-refinement check on
/// the total mass fails.
QuadratureRule build_quadrature(const KahlerModel& model, int resolution, double tolerance = 1e-10);

/// Chart point for rule parameters (u, phi) or (x, y).
Complex chart_from_params(const KahlerModel& model, double a, double b);

/// Sum of weight * integrand(node) in node order. Throws NonFiniteIntegrand.
Complex integrate(const QuadratureRule& rule, const std::function<Complex(Complex)>& integrand);

/// sup |f| estimated as the maximum over the nodes, followed by a local
/// pattern-search refinement in the rule parameters around the best nodes.
double sup_abs(const KahlerModel& model, const QuadratureRule& rule,
               const std::function<Complex(Complex)>& f);

}  // namespace btq

#endif  // BTQ_QUADRATURE_HPP
