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

#include "btq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "btq/error.hpp"

namespace btq {

double QuadratureRule::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] to (0, 1), ascending.
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = weights[n - 1 - i] = 0.5 * w;
  }
}

Complex chart_from_params(const KahlerModel& model, double a, double b) {
  if (model.is_sphere()) {
    const double u = std::clamp(a, 0.0, 1.0 - 1e-15);
    return std::polar(std::sqrt(u / (1.0 - u)), b);
  }
  return model.from_lattice(a, b);
}

namespace {

QuadratureRule build_raw(const KahlerModel& model, int resolution, double tolerance) {
  QuadratureRule rule;
  rule.kind = model.kind();
  rule.resolution = resolution;
  rule.tolerance = tolerance;
  const int n = resolution;
  rule.nodes.reserve(static_cast<size_t>(n) * n);
  rule.weights.reserve(static_cast<size_t>(n) * n);
  rule.params.reserve(static_cast<size_t>(n) * n);
  if (model.is_sphere()) {
    std::vector<double> u, wu;
    gauss_legendre_unit(n, u, wu);
    const double wphi = 2.0 * kPi / n;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        const double phi = wphi * k;
        rule.params.push_back({u[i], phi});
        rule.nodes.push_back({chart_from_params(model, u[i], phi)});
        rule.weights.push_back(wu[i] * wphi);
      }
    }
  } else {
    const double w = 2.0 * kPi / (static_cast<double>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x = static_cast<double>(i) / n;
        const double y = static_cast<double>(j) / n;
        rule.params.push_back({x, y});
        rule.nodes.push_back({model.from_lattice(x, y)});
        rule.weights.push_back(w);
      }
    }
  }
  return rule;
}

}  // namespace

QuadratureRule build_quadrature(const KahlerModel& model, int resolution, double tolerance) {
  if (resolution < 8) {
    throw Error(ErrorCode::UnderResolved,
                "quadrature resolution " + std::to_string(resolution) + " < 8");
  }
  QuadratureRule rule = build_raw(model, resolution, tolerance);
  const double mass = rule.weight_sum();
  if (std::abs(mass - model.volume()) > tolerance) {
    throw Error(ErrorCode::UnderResolved, "weight sum deviates from the model volume");
  }
  // Doubling must not change the total mass.
  const QuadratureRule fine = build_raw(model, 2 * resolution, tolerance);
  if (std::abs(fine.weight_sum() - mass) > tolerance) {
    throw Error(ErrorCode::UnderResolved, "self-refinement check on the total mass failed");
  }
  return rule;
}

Complex integrate(const QuadratureRule& rule, const std::function<Complex(Complex)>& integrand) {
  Complex acc{};
  for (size_t n = 0; n < rule.nodes.size(); ++n) {
    const Complex v = integrand(rule.nodes[n].z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::NonFiniteIntegrand, "integrand not finite at node " + std::to_string(n));
    }
    acc += rule.weights[n] * v;
  }
  return acc;
}

double sup_abs(const KahlerModel& model, const QuadratureRule& rule,
               const std::function<Complex(Complex)>& f) {
  std::vector<double> values(rule.size());
  for (size_t n = 0; n < rule.size(); ++n) values[n] = std::abs(f(rule.nodes[n].z));
  std::vector<size_t> order(rule.size());
  std::iota(order.begin(), order.end(), size_t{0});
  const size_t starts = std::min<size_t>(4, order.size());
  std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                    [&](size_t a, size_t b) { return values[a] > values[b]; });

  const bool sphere = model.is_sphere();
  auto clamp_a = [&](double a) { return sphere ? std::clamp(a, 0.0, 1.0 - 1e-15) : a; };
  auto value_at = [&](double a, double b) { return std::abs(f(chart_from_params(model, clamp_a(a), b))); };

  double best = values[order[0]];
  const double step0 = sphere ? 1.0 / rule.resolution : 1.0 / rule.resolution;
  const double step1 = sphere ? 2.0 * kPi / rule.resolution : 1.0 / rule.resolution;
  for (size_t s = 0; s < starts; ++s) {
    double a = rule.params[order[s]][0];
    double b = rule.params[order[s]][1];
    double cur = values[order[s]];
    double h0 = step0, h1 = step1;
    while (h0 > 1e-13) {
      bool moved = false;
      for (const auto& [da, db] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}) {
        const double na = clamp_a(a + da * h0);
        const double nb = b + db * h1;
        const double v = value_at(na, nb);
        if (v > cur) {
          cur = v;
          a = na;
          b = nb;
          moved = true;
        }
      }
      if (!moved) {
        h0 *= 0.5;
        h1 *= 0.5;
      }
    }
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace btq
