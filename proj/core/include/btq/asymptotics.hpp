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

#ifndef BTQ_ASYMPTOTICS_HPP
#define BTQ_ASYMPTOTICS_HPP

#include <string>
#include <vector>

#include "btq/types.hpp"

namespace btq {

/// Values of one quantity over an ascending set of levels.
struct LevelSweep {
  std::string model;
  std::vector<int> levels;
  std::string quantity;
  std::vector<Complex> values;

  /// Throws IllConditioned unless levels are strictly increasing, positive
  /// and match the value count.
  void validate() const;
};

/// v(m) ~ sum_{j<N} a_j m^{-j}, by least squares.
struct AsymptoticFit {
  std::vector<Complex> coefficients;
  /// One-sigma uncertainty of each coefficient, propagated from the residual.
  std::vector<double> std_errors;
  /// Euclidean norm of the residual vector.
  double residual = 0.0;
  /// Ratio of extreme singular values of the design matrix.
  double condition = 0.0;

  int order() const noexcept { return static_cast<int>(coefficients.size()); }
  /// |a_j - expected| <= factor * std_errors[j] + floor.
  bool coefficient_matches(int j, Complex expected, double factor = 10.0, double floor = 1e-9) const;
};

inline constexpr double kMaxFitCondition = 1e10;

/// Requires at least N + 2 levels and a design matrix with condition number
/// below kMaxFitCondition; throws IllConditioned otherwise.
AsymptoticFit fit_inverse_powers(const LevelSweep& sweep, int order);

/// Least-squares slope of log|v| against log m. Values must be positive in
/// modulus.
double loglog_slope(const std::vector<int>& levels, const std::vector<double>& values);

/// Smallest j whose fitted coefficient is distinguishable from zero
/// (|a_j| > 10 std_error_j + floor); order() when none is.
int leading_order(const AsymptoticFit& fit, double floor = 1e-9);

}  // namespace btq

#endif  // BTQ_ASYMPTOTICS_HPP
