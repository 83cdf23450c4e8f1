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

#ifndef BTQ_OBSERVABLE_HPP
#define BTQ_OBSERVABLE_HPP

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "btq/kahler_model.hpp"
#include "btq/types.hpp"

namespace btq {

/// A smooth function on a model together with its Wirtinger derivatives.
///
/// Derivative callables may be empty; code that needs them raises
/// OracleMissing. `exact_derivatives()` is false when the oracles are finite
/// differences rather than closed forms.
class Observable {
 public:
  using Fn = std::function<Complex(Complex)>;

  Observable(std::string label, Fn eval, Fn d_z, Fn d_zbar, Fn d_z_zbar, bool is_real,
             bool exact_derivatives = true);

  const std::string& label() const noexcept { return state_->label; }
  bool is_real() const noexcept { return state_->is_real; }
  bool has_first_derivatives() const noexcept { return state_->d_z && state_->d_zbar; }
  bool has_mixed_derivative() const noexcept { return static_cast<bool>(state_->d_z_zbar); }
  bool exact_derivatives() const noexcept { return state_->exact; }

  Complex eval(Complex z) const { return state_->eval(z); }
  Complex operator()(Complex z) const { return state_->eval(z); }
  Complex d_z(Complex z) const;
  Complex d_zbar(Complex z) const;
  Complex d_z_zbar(Complex z) const;

  Observable relabeled(std::string label) const;

 private:
  // Shared and immutable: composed observables capture their operands by
  // value, so copies must stay shallow.
  struct State {
    std::string label;
    Fn eval, d_z, d_zbar, d_z_zbar;
    bool is_real;
    bool exact;
  };
  std::shared_ptr<const State> state_;
};

Observable constant_observable(Complex value);

Observable operator+(const Observable& a, const Observable& b);
Observable operator-(const Observable& a, const Observable& b);
/// Pointwise product with product-rule derivative oracles.
Observable operator*(const Observable& a, const Observable& b);
Observable operator*(Complex c, const Observable& a);
Observable conjugate(const Observable& a);
Observable real_part(const Observable& a);
Observable imag_part(const Observable& a);

/// Tagged description of a standard observable.
struct ObservableSelector {
  enum class Tag { Constant, SphereCoordinate, FourierMode, Combination };

  Tag tag = Tag::Constant;
  Complex value{1.0, 0.0};  // Constant
  int axis = 0;             // SphereCoordinate: 1, 2, 3
  int k = 0, l = 0;         // FourierMode
  std::vector<std::pair<Complex, ObservableSelector>> terms;  // Combination

  static ObservableSelector constant(Complex c);
  static ObservableSelector coordinate(int axis);
  static ObservableSelector fourier(int k, int l);
  static ObservableSelector combination(std::vector<std::pair<Complex, ObservableSelector>> terms);
};

/// Sphere: embedding coordinates x1, x2, x3, constants and real linear
/// combinations. Torus: Fourier modes exp(2 pi i (k x + l y)) in lattice
/// coordinates, constants and linear combinations. Throws UnknownSelector
/// for anything else.
Observable standard_observable(const KahlerModel& model, const ObservableSelector& selector);

Observable sphere_coordinate(const KahlerModel& model, int axis);
Observable fourier_mode(const KahlerModel& model, int k, int l);

/// Parses a textual observable built from the standard ones, e.g.
/// "x3", "x1*x2 + 0.5", "x3^2", "re(f(1,0))", "im(f(0,1))", "f(1,-2)".
/// Throws UnknownSelector on syntax errors or selectors foreign to the model.
Observable parse_observable(const KahlerModel& model, std::string_view text);

/// max |d_z f - central difference|, and likewise for d_zbar and d_z dzbar,
/// over the given points.
double derivative_oracle_defect(const Observable& f, const std::vector<ChartPoint>& points);

/// Finite-difference Wirtinger derivatives of a pointwise function.
Complex fd_d_z(const Observable::Fn& f, Complex z, double h = 1e-5);
Complex fd_d_zbar(const Observable::Fn& f, Complex z, double h = 1e-5);
Complex fd_d_z_zbar(const Observable::Fn& f, Complex z, double h = 1e-3);

}  // namespace btq

#endif  // BTQ_OBSERVABLE_HPP
