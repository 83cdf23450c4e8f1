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

#include "btq/asymptotics.hpp"

#include <cmath>

#include "btq/error.hpp"

namespace btq {

void LevelSweep::validate() const {
  if (levels.size() != values.size()) throw Error(ErrorCode::IllConditioned, "sweep " + quantity + ": level/value count mismatch");
  for (size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw Error(ErrorCode::IllConditioned, "sweep " + quantity + ": non-positive level");
    if (i > 0 && levels[i] <= levels[i - 1]) {
      throw Error(ErrorCode::IllConditioned, "sweep " + quantity + ": levels not strictly increasing");
    }
  }
}

bool AsymptoticFit::coefficient_matches(int j, Complex expected, double factor, double floor) const {
  return std::abs(coefficients.at(static_cast<size_t>(j)) - expected) <=
         factor * std_errors.at(static_cast<size_t>(j)) + floor;
}

AsymptoticFit fit_inverse_powers(const LevelSweep& sweep, int order) {
  sweep.validate();
  const auto rows = static_cast<Eigen::Index>(sweep.levels.size());
  if (order < 1 || rows < order + 2) {
    throw Error(ErrorCode::IllConditioned, "order-" + std::to_string(order) + " fit needs at least " +
                                               std::to_string(order + 2) + " levels, got " + std::to_string(rows));
  }
  RMatrix design(rows, order);
  CVector rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double inv = 1.0 / sweep.levels[static_cast<size_t>(i)];
    double p = 1.0;
    for (int j = 0; j < order; ++j) {
      design(i, j) = p;
      p *= inv;
    }
    rhs(i) = sweep.values[static_cast<size_t>(i)];
  }
  Eigen::JacobiSVD<RMatrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  AsymptoticFit fit;
  fit.condition = s(0) / s(s.size() - 1);
  if (!(fit.condition < kMaxFitCondition)) {
    throw Error(ErrorCode::IllConditioned, "fit condition number " + std::to_string(fit.condition));
  }
  const RVector re = svd.solve(rhs.real());
  const RVector im = svd.solve(rhs.imag());
  CVector coeffs(order);
  for (int j = 0; j < order; ++j) coeffs(j) = Complex{re(j), im(j)};
  const CVector resid = design.cast<Complex>() * coeffs - rhs;
  fit.residual = resid.norm();
  // cov = s^2 (V^T V)^{-1} = s^2 W diag(sigma^-2) W^T
  const double dof = static_cast<double>(rows - order);
  const double sigma2 = resid.squaredNorm() / dof;
  const RMatrix w = svd.matrixV();
  for (int j = 0; j < order; ++j) {
    double var = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) var += w(j, k) * w(j, k) / (s(k) * s(k));
    fit.coefficients.push_back(coeffs(j));
    fit.std_errors.push_back(std::sqrt(sigma2 * var));
  }
  return fit;
}

double loglog_slope(const std::vector<int>& levels, const std::vector<double>& values) {
  if (levels.size() != values.size() || levels.size() < 2) {
    throw Error(ErrorCode::IllConditioned, "slope needs at least two levels");
  }
  const double n = static_cast<double>(levels.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < levels.size(); ++i) {
    if (!(std::abs(values[i]) > 0.0)) throw Error(ErrorCode::IllConditioned, "slope of a vanishing sequence");
    const double x = std::log(static_cast<double>(levels[i]));
    const double y = std::log(std::abs(values[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int leading_order(const AsymptoticFit& fit, double floor) {
  for (int j = 0; j < fit.order(); ++j) {
    if (std::abs(fit.coefficients[static_cast<size_t>(j)]) > 10.0 * fit.std_errors[static_cast<size_t>(j)] + floor) return j;
  }
  return fit.order();
}

}  // namespace btq
