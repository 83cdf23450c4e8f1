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

#include "btq/observable.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "btq/error.hpp"

namespace btq {

namespace {

std::string format_complex(Complex c) {
  char buf[64];
  if (c.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%g", c.real());
  } else {
    std::snprintf(buf, sizeof buf, "(%g%+gi)", c.real(), c.imag());
  }
  return buf;
}

}  // namespace

Observable::Observable(std::string label, Fn eval, Fn d_z, Fn d_zbar, Fn d_z_zbar, bool is_real,
                       bool exact_derivatives)
    : state_(std::make_shared<const State>(State{std::move(label), std::move(eval), std::move(d_z), std::move(d_zbar),
                                                 std::move(d_z_zbar), is_real, exact_derivatives})) {}

Complex Observable::d_z(Complex z) const {
  if (!state_->d_z) throw Error(ErrorCode::OracleMissing, "d_z of " + state_->label);
  return state_->d_z(z);
}

Complex Observable::d_zbar(Complex z) const {
  if (!state_->d_zbar) throw Error(ErrorCode::OracleMissing, "d_zbar of " + state_->label);
  return state_->d_zbar(z);
}

Complex Observable::d_z_zbar(Complex z) const {
  if (!state_->d_z_zbar) throw Error(ErrorCode::OracleMissing, "d_z_zbar of " + state_->label);
  return state_->d_z_zbar(z);
}

Observable Observable::relabeled(std::string label) const {
  Observable out = *this;
  State relabeled_state = *state_;
  relabeled_state.label = std::move(label);
  out.state_ = std::make_shared<const State>(std::move(relabeled_state));
  return out;
}

Observable constant_observable(Complex value) {
  auto zero = [](Complex) { return Complex{}; };
  return Observable(format_complex(value), [value](Complex) { return value; }, zero, zero, zero,
                    value.imag() == 0.0);
}

namespace {

// Combines oracles only when both operands carry them.
template <class Op>
Observable::Fn lift(const Observable& a, const Observable& b, bool present, Op op) {
  if (!present) return {};
  return [a, b, op](Complex z) { return op(a, b, z); };
}

}  // namespace

Observable operator+(const Observable& a, const Observable& b) {
  const bool first = a.has_first_derivatives() && b.has_first_derivatives();
  const bool mixed = a.has_mixed_derivative() && b.has_mixed_derivative();
  return Observable(
      "(" + a.label() + "+" + b.label() + ")", [a, b](Complex z) { return a(z) + b(z); },
      lift(a, b, first, [](const Observable& p, const Observable& q, Complex z) { return p.d_z(z) + q.d_z(z); }),
      lift(a, b, first, [](const Observable& p, const Observable& q, Complex z) { return p.d_zbar(z) + q.d_zbar(z); }),
      lift(a, b, mixed, [](const Observable& p, const Observable& q, Complex z) { return p.d_z_zbar(z) + q.d_z_zbar(z); }),
      a.is_real() && b.is_real(), a.exact_derivatives() && b.exact_derivatives());
}

Observable operator-(const Observable& a, const Observable& b) {
  return (a + Complex{-1.0, 0.0} * b).relabeled("(" + a.label() + "-" + b.label() + ")");
}

Observable operator*(const Observable& a, const Observable& b) {
  const bool first = a.has_first_derivatives() && b.has_first_derivatives();
  const bool mixed = first && a.has_mixed_derivative() && b.has_mixed_derivative();
  return Observable(
      a.label() + "*" + b.label(), [a, b](Complex z) { return a(z) * b(z); },
      lift(a, b, first, [](const Observable& p, const Observable& q, Complex z) {
        return p.d_z(z) * q(z) + p(z) * q.d_z(z);
      }),
      lift(a, b, first, [](const Observable& p, const Observable& q, Complex z) {
        return p.d_zbar(z) * q(z) + p(z) * q.d_zbar(z);
      }),
      lift(a, b, mixed, [](const Observable& p, const Observable& q, Complex z) {
        return p.d_z_zbar(z) * q(z) + p.d_z(z) * q.d_zbar(z) + p.d_zbar(z) * q.d_z(z) +
               p(z) * q.d_z_zbar(z);
      }),
      a.is_real() && b.is_real(), a.exact_derivatives() && b.exact_derivatives());
}

Observable operator*(Complex c, const Observable& a) {
  auto scale = [c](const Observable::Fn& fn) -> Observable::Fn {
    if (!fn) return {};
    return [c, fn](Complex z) { return c * fn(z); };
  };
  Observable::Fn dz, dzb, dzz;
  if (a.has_first_derivatives()) {
    dz = scale([a](Complex z) { return a.d_z(z); });
    dzb = scale([a](Complex z) { return a.d_zbar(z); });
  }
  if (a.has_mixed_derivative()) dzz = scale([a](Complex z) { return a.d_z_zbar(z); });
  return Observable(format_complex(c) + "*" + a.label(), [a, c](Complex z) { return c * a(z); },
                    dz, dzb, dzz, a.is_real() && c.imag() == 0.0, a.exact_derivatives());
}

Observable conjugate(const Observable& a) {
  Observable::Fn dz, dzb, dzz;
  if (a.has_first_derivatives()) {
    dz = [a](Complex z) { return std::conj(a.d_zbar(z)); };
    dzb = [a](Complex z) { return std::conj(a.d_z(z)); };
  }
  if (a.has_mixed_derivative()) dzz = [a](Complex z) { return std::conj(a.d_z_zbar(z)); };
  return Observable("conj(" + a.label() + ")", [a](Complex z) { return std::conj(a(z)); }, dz, dzb,
                    dzz, a.is_real(), a.exact_derivatives());
}

Observable real_part(const Observable& a) {
  Observable out = Complex{0.5, 0.0} * (a + conjugate(a));
  return Observable(
      "re(" + a.label() + ")", [out](Complex z) { return Complex{out(z).real(), 0.0}; },
      out.has_first_derivatives() ? Observable::Fn([out](Complex z) { return out.d_z(z); }) : Observable::Fn{},
      out.has_first_derivatives() ? Observable::Fn([out](Complex z) { return out.d_zbar(z); }) : Observable::Fn{},
      out.has_mixed_derivative() ? Observable::Fn([out](Complex z) { return out.d_z_zbar(z); }) : Observable::Fn{},
      true, out.exact_derivatives());
}

Observable imag_part(const Observable& a) {
  Observable out = Complex{0.0, -0.5} * (a - conjugate(a));
  return Observable(
      "im(" + a.label() + ")", [out](Complex z) { return Complex{out(z).real(), 0.0}; },
      out.has_first_derivatives() ? Observable::Fn([out](Complex z) { return out.d_z(z); }) : Observable::Fn{},
      out.has_first_derivatives() ? Observable::Fn([out](Complex z) { return out.d_zbar(z); }) : Observable::Fn{},
      out.has_mixed_derivative() ? Observable::Fn([out](Complex z) { return out.d_z_zbar(z); }) : Observable::Fn{},
      true, out.exact_derivatives());
}

ObservableSelector ObservableSelector::constant(Complex c) {
  ObservableSelector s;
  s.tag = Tag::Constant;
  s.value = c;
  return s;
}

ObservableSelector ObservableSelector::coordinate(int axis) {
  ObservableSelector s;
  s.tag = Tag::SphereCoordinate;
  s.axis = axis;
  return s;
}

ObservableSelector ObservableSelector::fourier(int k, int l) {
  ObservableSelector s;
  s.tag = Tag::FourierMode;
  s.k = k;
  s.l = l;
  return s;
}

ObservableSelector ObservableSelector::combination(
    std::vector<std::pair<Complex, ObservableSelector>> terms) {
  ObservableSelector s;
  s.tag = Tag::Combination;
  s.terms = std::move(terms);
  return s;
}

Observable sphere_coordinate(const KahlerModel& model, int axis) {
  if (!model.is_sphere()) throw Error(ErrorCode::UnknownSelector, "x" + std::to_string(axis) + " on " + model.name());
  auto s = [](Complex z) { return 1.0 + std::norm(z); };
  switch (axis) {
    case 1:
      return Observable(
          "x1", [s](Complex z) { return (z + std::conj(z)) / s(z); },
          [s](Complex z) { return (1.0 - std::conj(z) * std::conj(z)) / (s(z) * s(z)); },
          [s](Complex z) { return (1.0 - z * z) / (s(z) * s(z)); },
          [s](Complex z) { return -2.0 * (z + std::conj(z)) / (s(z) * s(z) * s(z)); }, true);
    case 2:
      return Observable(
          "x2", [s](Complex z) { return -kI * (z - std::conj(z)) / s(z); },
          [s](Complex z) { return -kI * (1.0 + std::conj(z) * std::conj(z)) / (s(z) * s(z)); },
          [s](Complex z) { return kI * (1.0 + z * z) / (s(z) * s(z)); },
          [s](Complex z) { return 2.0 * kI * (z - std::conj(z)) / (s(z) * s(z) * s(z)); }, true);
    case 3:
      return Observable(
          "x3", [s](Complex z) { return Complex{(2.0 - s(z)) / s(z), 0.0}; },
          [s](Complex z) { return -2.0 * std::conj(z) / (s(z) * s(z)); },
          [s](Complex z) { return -2.0 * z / (s(z) * s(z)); },
          [s](Complex z) { return Complex{-2.0 * (2.0 - s(z)) / (s(z) * s(z) * s(z)), 0.0}; }, true);
    default:
      throw Error(ErrorCode::UnknownSelector, "sphere coordinate axis " + std::to_string(axis));
  }
}

Observable fourier_mode(const KahlerModel& model, int k, int l) {
  if (!model.is_torus()) throw Error(ErrorCode::UnknownSelector, "Fourier mode on " + model.name());
  const Complex tau = model.tau();
  // f = exp(a Re z + b Im z) with kx + ly rewritten in terms of Re z, Im z.
  const Complex a = 2.0 * kPi * kI * static_cast<double>(k);
  const Complex b = 2.0 * kPi * kI * ((l - k * tau.real()) / tau.imag());
  auto f = [a, b](Complex z) { return std::exp(a * z.real() + b * z.imag()); };
  const Complex cz = 0.5 * (a - kI * b);
  const Complex czb = 0.5 * (a + kI * b);
  const Complex czz = 0.25 * (a * a + b * b);
  return Observable(
      "f(" + std::to_string(k) + "," + std::to_string(l) + ")", f,
      [f, cz](Complex z) { return cz * f(z); }, [f, czb](Complex z) { return czb * f(z); },
      [f, czz](Complex z) { return czz * f(z); }, k == 0 && l == 0);
}

Observable standard_observable(const KahlerModel& model, const ObservableSelector& sel) {
  using Tag = ObservableSelector::Tag;
  switch (sel.tag) {
    case Tag::Constant:
      if (model.is_sphere() && sel.value.imag() != 0.0) {
        throw Error(ErrorCode::UnknownSelector, "sphere constants must be real");
      }
      return constant_observable(sel.value);
    case Tag::SphereCoordinate:
      return sphere_coordinate(model, sel.axis);
    case Tag::FourierMode:
      return fourier_mode(model, sel.k, sel.l);
    case Tag::Combination: {
      if (sel.terms.empty()) throw Error(ErrorCode::UnknownSelector, "empty combination");
      std::optional<Observable> acc;
      for (const auto& [c, term] : sel.terms) {
        if (model.is_sphere() && c.imag() != 0.0) {
          throw Error(ErrorCode::UnknownSelector, "sphere combinations must be real");
        }
        Observable piece = c * standard_observable(model, term);
        acc = acc ? *acc + piece : piece;
      }
      return *acc;
    }
  }
  throw Error(ErrorCode::UnknownSelector, "bad selector tag");
}

namespace {

class Parser {
 public:
  Parser(const KahlerModel& model, std::string_view text) : model_(model), text_(text) {}

  Observable parse() {
    Observable out = expr();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::UnknownSelector,
                "cannot parse observable '" + std::string(text_) + "': " + what + " at " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  int integer() {
    skip();
    int value = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{}) fail("expected integer");
    pos_ = static_cast<size_t>(ptr - text_.data());
    return value;
  }

  Observable expr() {
    Observable acc = term();
    while (true) {
      if (accept("+")) {
        acc = acc + term();
      } else if (accept("-")) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Observable term() {
    Observable acc = unary();
    while (accept("*")) acc = acc * unary();
    return acc;
  }

  Observable unary() {
    if (accept("-")) return Complex{-1.0, 0.0} * unary();
    return power();
  }

  Observable power() {
    Observable base = primary();
    if (accept("^")) {
      const int n = integer();
      if (n < 0 || n > 16) fail("exponent out of range");
      if (n == 0) return constant_observable(1.0);
      Observable acc = base;
      for (int i = 1; i < n; ++i) acc = acc * base;
      return acc.relabeled(base.label() + "^" + std::to_string(n));
    }
    return base;
  }

  Observable primary() {
    skip();
    if (accept("(")) {
      Observable inner = expr();
      expect(")");
      return inner;
    }
    if (accept("re(")) {
      Observable inner = expr();
      expect(")");
      return real_part(inner);
    }
    if (accept("im(")) {
      Observable inner = expr();
      expect(")");
      return imag_part(inner);
    }
    if (accept("conj(")) {
      Observable inner = expr();
      expect(")");
      return conjugate(inner);
    }
    if (accept("f(")) {
      const int k = integer();
      expect(",");
      const int l = integer();
      expect(")");
      return fourier_mode(model_, k, l);
    }
    for (int axis = 1; axis <= 3; ++axis) {
      if (accept("x" + std::to_string(axis))) return sphere_coordinate(model_, axis);
    }
    if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
      if (ec != std::errc{}) fail("bad number");
      pos_ = static_cast<size_t>(ptr - text_.data());
      return constant_observable(value);
    }
    fail("unknown selector");
  }

  const KahlerModel& model_;
  std::string_view text_;
  size_t pos_ = 0;
};

}  // namespace

Observable parse_observable(const KahlerModel& model, std::string_view text) {
  Observable out = Parser(model, text).parse();
  return out.relabeled(std::string(text));
}

Complex fd_d_z(const Observable::Fn& f, Complex z, double h) {
  const Complex dx = (f(z + h) - f(z - h)) / (2.0 * h);
  const Complex dy = (f(z + kI * h) - f(z - kI * h)) / (2.0 * h);
  return 0.5 * (dx - kI * dy);
}

Complex fd_d_zbar(const Observable::Fn& f, Complex z, double h) {
  const Complex dx = (f(z + h) - f(z - h)) / (2.0 * h);
  const Complex dy = (f(z + kI * h) - f(z - kI * h)) / (2.0 * h);
  return 0.5 * (dx + kI * dy);
}

Complex fd_d_z_zbar(const Observable::Fn& f, Complex z, double h) {
  // Fourth-order second differences along x and y.
  auto second = [&](Complex step) {
    return (-f(z + 2.0 * step) + 16.0 * f(z + step) - 30.0 * f(z) + 16.0 * f(z - step) -
            f(z - 2.0 * step)) /
           (12.0 * h * h);
  };
  return 0.25 * (second(Complex{h, 0.0}) + second(Complex{0.0, h}));
}

double derivative_oracle_defect(const Observable& f, const std::vector<ChartPoint>& points) {
  Observable::Fn ev = [&f](Complex z) { return f(z); };
  double worst = 0.0;
  for (const auto& p : points) {
    if (f.has_first_derivatives()) {
      worst = std::max(worst, std::abs(f.d_z(p.z) - fd_d_z(ev, p.z)));
      worst = std::max(worst, std::abs(f.d_zbar(p.z) - fd_d_zbar(ev, p.z)));
    }
    if (f.has_mixed_derivative()) {
      worst = std::max(worst, std::abs(f.d_z_zbar(p.z) - fd_d_z_zbar(ev, p.z)));
    }
  }
  return worst;
}

}  // namespace btq
