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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "btq/calculus.hpp"
#include "btq/kahler_model.hpp"
#include "btq/observable.hpp"
#include "btq/quadrature.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace btq;

namespace {

std::vector<Complex> sphere_points(int count, unsigned seed = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> r(0.0, 2.5), phi(0.0, 2.0 * kPi);
  std::vector<Complex> out;
  for (int i = 0; i < count; ++i) out.push_back(std::polar(r(rng), phi(rng)));
  return out;
}

std::vector<Complex> torus_points(const KahlerModel& model, int count, unsigned seed = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> out;
  for (int i = 0; i < count; ++i) out.push_back(model.from_lattice(unit(rng), unit(rng)));
  return out;
}

}  // namespace

TEST(Model, SphereAtOrigin) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  EXPECT_DOUBLE_EQ(s.kahler_density(0.0), 1.0);
  EXPECT_DOUBLE_EQ(s.metric_weight(0.0), 1.0);
  EXPECT_NEAR(s.kahler_density(Complex(1.0, 1.0)), 1.0 / 9.0, 1e-15);
}

TEST(Model, SquareTorus) {
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.0, 1.0));
  EXPECT_NEAR(t.kahler_density(Complex(0.3, 0.7)), kPi, 1e-15);
  EXPECT_NEAR(t.volume(), 2.0 * kPi, 1e-15);
  EXPECT_NEAR(t.metric_weight(Complex(0.0, 0.5)), std::exp(-2.0 * kPi * 0.25), 1e-15);
}

TEST(Model, InvalidModulus) {
  EXPECT_BTQ_ERROR(make_model(ModelKind::Torus, Complex(1.0, -1.0)), ErrorCode::InvalidModulus);
  EXPECT_BTQ_ERROR(make_model(ModelKind::Torus, Complex(1.0, 0.0)), ErrorCode::InvalidModulus);
  EXPECT_BTQ_ERROR(make_model(ModelKind::Torus), ErrorCode::InvalidModulus);
}

TEST(Model, TorusReductionUsesLatticeCoordinates) {
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.5, 1.2));
  const Complex z = t.from_lattice(2.25, -1.5);
  const auto [x, y] = t.lattice_coords(t.reduce({z}).z);
  EXPECT_NEAR(x, 0.25, 1e-12);
  EXPECT_NEAR(y, 0.5, 1e-12);
}

TEST(Model, QuantumConditionDefect) {
  EXPECT_LT(quantum_condition_defect(make_model(ModelKind::Sphere)), 1e-6);
  EXPECT_LT(quantum_condition_defect(make_model(ModelKind::Torus, Complex(0.0, 1.0))), 1e-6);
  EXPECT_LT(quantum_condition_defect(make_model(ModelKind::Torus, Complex(0.3, 0.8))), 1e-6);
}

TEST(Model, QuantumConditionAgainstIndependentStencil) {
  // g = -d dbar log h, with the oracle's fourth-order stencil.
  for (const KahlerModel& model : {make_model(ModelKind::Sphere), make_model(ModelKind::Torus, Complex(0.2, 1.1))}) {
    const oracle::Fn lh = [&](Complex z) { return Complex(model.log_metric_weight(z)); };
    for (Complex z : sphere_points(20)) {
      const double g = model.kahler_density(z);
      EXPECT_NEAR(-oracle::d_z_zbar(lh, z).real() / g, 1.0, 1e-6);
    }
  }
}

TEST(Quadrature, WeightSums) {
  const QuadratureRule s = build_quadrature(make_model(ModelKind::Sphere), 64);
  const QuadratureRule t = build_quadrature(make_model(ModelKind::Torus, Complex(0.0, 1.0)), 64);
  EXPECT_NEAR(s.weight_sum(), 2.0 * kPi, 1e-10);
  EXPECT_NEAR(t.weight_sum(), 2.0 * kPi, 1e-10);
  for (double w : s.weights) EXPECT_GT(w, 0.0);
  for (double w : t.weights) EXPECT_GT(w, 0.0);
}

TEST(Quadrature, TinyResolutionIsUnderResolved) {
  EXPECT_BTQ_ERROR(build_quadrature(make_model(ModelKind::Sphere), 4), ErrorCode::UnderResolved);
  EXPECT_BTQ_ERROR(build_quadrature(make_model(ModelKind::Torus, Complex(0.0, 1.0)), 4), ErrorCode::UnderResolved);
}

TEST(Quadrature, Integrals) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.0, 1.0));
  const QuadratureRule rs = build_quadrature(s, 64);
  const QuadratureRule rt = build_quadrature(t, 64);
  EXPECT_NEAR(std::abs(integrate(rs, [](Complex) { return Complex(1.0); }) - 2.0 * kPi), 0.0, 1e-10);
  const Observable x3 = sphere_coordinate(s, 3);
  const Observable f10 = fourier_mode(t, 1, 0);
  EXPECT_NEAR(std::abs(integrate(rs, [&](Complex z) { return x3(z); })), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(integrate(rt, [&](Complex z) { return f10(z); })), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(integrate(rt, [](Complex) { return Complex(1.0); }) - 2.0 * kPi), 0.0, 1e-10);
  // Closed form of the x3^2 moment: 2 pi / 3.
  EXPECT_NEAR(integrate(rs, [&](Complex z) { return x3(z) * x3(z); }).real(), 2.0 * kPi / 3.0, 1e-12);
}

TEST(Quadrature, NonFiniteIntegrand) {
  const QuadratureRule rs = build_quadrature(make_model(ModelKind::Sphere), 16);
  EXPECT_BTQ_ERROR(integrate(rs, [](Complex) { return Complex(std::nan("")); }), ErrorCode::NonFiniteIntegrand);
  EXPECT_BTQ_ERROR(integrate(rs, [](Complex z) { return 1.0 / (z - z); }), ErrorCode::NonFiniteIntegrand);
}

TEST(Quadrature, SphereGramIntegrandsAreExact) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const int res = 24;
  const QuadratureRule rule = build_quadrature(s, res);
  const int m = res;  // h^m keeps the integrand polynomial of degree m in u
  for (int j = 0; j <= res / 2; ++j) {
    for (int k = 0; k <= res / 2; ++k) {
      const Complex value = integrate(rule, [&](Complex z) {
        return std::pow(std::conj(z), j) * std::pow(z, k) * std::pow(s.metric_weight(z), m);
      });
      const double expected = j == k ? oracle::sphere_gram(m, j) : 0.0;
      EXPECT_NEAR(std::abs(value - expected), 0.0, 1e-12) << j << "," << k;
    }
  }
}

TEST(Quadrature, DeterministicOrder) {
  const QuadratureRule a = build_quadrature(make_model(ModelKind::Sphere), 32);
  const QuadratureRule b = build_quadrature(make_model(ModelKind::Sphere), 32);
  auto f = [](Complex z) { return std::exp(-std::norm(z)) * z; };
  EXPECT_EQ(integrate(a, f), integrate(b, f));
}

TEST(Observables, SphereCoordinates) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const Observable x1 = standard_observable(s, ObservableSelector::coordinate(1));
  const Observable x3 = standard_observable(s, ObservableSelector::coordinate(3));
  EXPECT_DOUBLE_EQ(x3(0.0).real(), 1.0);
  EXPECT_NEAR(std::abs(x3(std::polar(1.0, 0.7))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(x1.d_z(0.0) - 1.0), 0.0, 1e-15);
  // The embedding lands on the unit sphere.
  const Observable x2 = sphere_coordinate(s, 2);
  for (Complex z : sphere_points(10)) {
    EXPECT_NEAR(std::norm(x1(z)) + std::norm(x2(z)) + std::norm(x3(z)), 1.0, 1e-14);
  }
}

TEST(Observables, TorusFourierMode) {
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.0, 1.0));
  const Observable f10 = standard_observable(t, ObservableSelector::fourier(1, 0));
  EXPECT_NEAR(std::abs(f10(t.from_lattice(0.5, 0.0)) + 1.0), 0.0, 1e-15);
  const KahlerModel skew = make_model(ModelKind::Torus, Complex(0.4, 0.9));
  const Observable f23 = fourier_mode(skew, 2, 3);
  const Complex expected = std::exp(Complex(0.0, 2.0 * kPi * (2 * 0.3 + 3 * 0.6)));
  EXPECT_NEAR(std::abs(f23(skew.from_lattice(0.3, 0.6)) - expected), 0.0, 1e-13);
}

TEST(Observables, UnknownSelectors) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.0, 1.0));
  EXPECT_BTQ_ERROR(standard_observable(s, ObservableSelector::fourier(1, 0)), ErrorCode::UnknownSelector);
  EXPECT_BTQ_ERROR(standard_observable(t, ObservableSelector::coordinate(1)), ErrorCode::UnknownSelector);
  EXPECT_BTQ_ERROR(standard_observable(s, ObservableSelector::coordinate(4)), ErrorCode::UnknownSelector);
  EXPECT_BTQ_ERROR(standard_observable(s, ObservableSelector::combination({})), ErrorCode::UnknownSelector);
  EXPECT_BTQ_ERROR(parse_observable(s, "x4"), ErrorCode::UnknownSelector);
  EXPECT_BTQ_ERROR(parse_observable(s, "x1 +"), ErrorCode::UnknownSelector);
  EXPECT_BTQ_ERROR(parse_observable(s, "f(1,0)"), ErrorCode::UnknownSelector);
}

TEST(Observables, ParsedCombinations) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const Observable e = parse_observable(s, "2*x1 - x3^2 + 0.5");
  const Observable x1 = sphere_coordinate(s, 1), x3 = sphere_coordinate(s, 3);
  for (Complex z : sphere_points(10)) {
    EXPECT_NEAR(std::abs(e(z) - (2.0 * x1(z) - x3(z) * x3(z) + 0.5)), 0.0, 1e-14);
  }
  EXPECT_TRUE(e.is_real());
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.0, 1.0));
  const Observable re = parse_observable(t, "re(f(1,0))");
  EXPECT_TRUE(re.is_real());
  EXPECT_NEAR(re(t.from_lattice(0.25, 0.4)).real(), 0.0, 1e-15);
}

TEST(Observables, RealFlagHoldsAtNodes) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.3, 1.0));
  const QuadratureRule rs = build_quadrature(s, 16), rt = build_quadrature(t, 16);
  for (const char* text : {"x1", "x2", "x3", "x1*x2 - 3*x3"}) {
    const Observable f = parse_observable(s, text);
    ASSERT_TRUE(f.is_real());
    for (const ChartPoint& p : rs.nodes) EXPECT_LT(std::abs(f(p.z).imag()), 1e-12);
  }
  for (const char* text : {"re(f(1,2))", "im(f(0,1))", "f(1,0) + f(-1,0)"}) {
    const Observable f = parse_observable(t, text);
    if (!f.is_real()) continue;
    for (const ChartPoint& p : rt.nodes) EXPECT_LT(std::abs(f(p.z).imag()), 1e-12);
  }
  EXPECT_FALSE(fourier_mode(t, 1, 0).is_real());
}

TEST(Observables, DerivativeOraclesMatchIndependentDifferences) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.3, 1.1));
  std::vector<Observable> obs = {sphere_coordinate(s, 1), sphere_coordinate(s, 2), sphere_coordinate(s, 3),
                                 parse_observable(s, "x1*x3 + x2^2")};
  std::vector<Observable> tobs = {fourier_mode(t, 1, 0), fourier_mode(t, 0, 1), fourier_mode(t, 2, -1),
                                  parse_observable(t, "re(f(1,1))")};
  auto check = [](const Observable& f, const std::vector<Complex>& pts) {
    const oracle::Fn fn = [&](Complex z) { return f(z); };
    for (Complex z : pts) {
      EXPECT_NEAR(std::abs(f.d_z(z) - oracle::d_z(fn, z)), 0.0, 1e-6) << f.label();
      EXPECT_NEAR(std::abs(f.d_zbar(z) - oracle::d_zbar(fn, z)), 0.0, 1e-6) << f.label();
      EXPECT_NEAR(std::abs(f.d_z_zbar(z) - oracle::d_z_zbar(fn, z)), 0.0, 1e-6) << f.label();
    }
  };
  for (const Observable& f : obs) check(f, sphere_points(15));
  for (const Observable& f : tobs) check(f, torus_points(t, 15));
}

TEST(Observables, DerivativeOracleSelfTest) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  std::vector<ChartPoint> pts;
  for (Complex z : sphere_points(20)) pts.push_back({z});
  EXPECT_LT(derivative_oracle_defect(parse_observable(s, "x1*x2*x3"), pts), 1e-6);
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.0, 1.0));
  EXPECT_LT(derivative_oracle_defect(fourier_mode(t, 1, 1), pts), 1e-6);
  // A deliberately wrong oracle is caught.
  const Observable bad("bad", [](Complex z) { return z * z; }, [](Complex z) { return z; },
                       [](Complex) { return Complex(0.0); }, [](Complex) { return Complex(0.0); }, false);
  EXPECT_GT(derivative_oracle_defect(bad, pts), 1e-3);
}

TEST(Bracket, SphereCoordinates) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const Observable x1 = sphere_coordinate(s, 1), x2 = sphere_coordinate(s, 2), x3 = sphere_coordinate(s, 3);
  const Observable b = poisson_bracket(s, x3, x1);
  const QuadratureRule rule = build_quadrature(s, 16);
  for (const ChartPoint& p : rule.nodes) EXPECT_NEAR(std::abs(b(p.z) - 2.0 * x2(p.z)), 0.0, 1e-10);
  // Cyclic relations with the same normalization.
  const Observable b12 = poisson_bracket(s, x1, x2);
  const Observable b23 = poisson_bracket(s, x2, x3);
  for (Complex z : sphere_points(20)) {
    EXPECT_NEAR(std::abs(b12(z) - 2.0 * x3(z)), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(b23(z) - 2.0 * x1(z)), 0.0, 1e-10);
  }
}

TEST(Bracket, SelfBracketVanishes) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const Observable f = parse_observable(s, "x1*x3 + x2");
  const Observable b = poisson_bracket(s, f, f);
  for (Complex z : sphere_points(20)) EXPECT_NEAR(std::abs(b(z)), 0.0, 1e-14);
}

TEST(Bracket, TorusModeConstant) {
  // At tau = i, d f10 = pi f10, dbar f10 = pi f10, d f01 = -i pi f01 and dbar f01 = i pi f01,
  // so {f10, f01} = (i/pi)(2 i pi^2) f11 = -2 pi f11.
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.0, 1.0));
  const Observable f10 = fourier_mode(t, 1, 0), f01 = fourier_mode(t, 0, 1), f11 = fourier_mode(t, 1, 1);
  const Observable b = poisson_bracket(t, f10, f01);
  const oracle::Fn a = [&](Complex z) { return f10(z); };
  const oracle::Fn c = [&](Complex z) { return f01(z); };
  for (Complex z : torus_points(t, 10)) {
    const Complex fd = Complex(0.0, 1.0) * (t.tau().imag() / kPi) *
                       (oracle::d_zbar(a, z) * oracle::d_z(c, z) - oracle::d_z(a, z) * oracle::d_zbar(c, z));
    EXPECT_NEAR(std::abs(b(z) - fd), 0.0, 1e-6);
    EXPECT_NEAR(std::abs(b(z) / f11(z) - (-2.0 * kPi)), 0.0, 1e-10);
  }
}

TEST(Bracket, AntisymmetryAndLeibniz) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.3, 0.9));
  const QuadratureRule rs = build_quadrature(s, 12), rt = build_quadrature(t, 12);
  auto run = [](const KahlerModel& model, const QuadratureRule& rule, const Observable& f, const Observable& g,
                const Observable& h) {
    const Observable fg = poisson_bracket(model, f, g), gf = poisson_bracket(model, g, f);
    const Observable lhs = poisson_bracket(model, f * g, h);
    const Observable gh = poisson_bracket(model, g, h), fh = poisson_bracket(model, f, h);
    for (const ChartPoint& p : rule.nodes) {
      EXPECT_LT(std::abs(fg(p.z) + gf(p.z)), 1e-10);
      EXPECT_LT(std::abs(lhs(p.z) - f(p.z) * gh(p.z) - fh(p.z) * g(p.z)), 1e-8);
    }
  };
  run(s, rs, sphere_coordinate(s, 1), sphere_coordinate(s, 3), sphere_coordinate(s, 2));
  run(s, rs, parse_observable(s, "x1*x2"), sphere_coordinate(s, 3), parse_observable(s, "x3^2 + x1"));
  run(t, rt, fourier_mode(t, 1, 0), fourier_mode(t, 0, 1), fourier_mode(t, 1, -1));
  run(t, rt, parse_observable(t, "re(f(1,1))"), fourier_mode(t, 2, 0), parse_observable(t, "im(f(0,1))"));
}

TEST(Laplacian, Examples) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const Observable x3 = sphere_coordinate(s, 3);
  const Observable d = laplacian(s, x3);
  const Observable d1 = laplacian(s, constant_observable(1.0));
  for (Complex z : sphere_points(30)) {
    EXPECT_NEAR(std::abs(d(z) + 2.0 * x3(z)), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(d1(z)), 0.0, 1e-15);
  }
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.0, 1.0));
  const Observable f10 = fourier_mode(t, 1, 0);
  const Observable df = laplacian(t, f10);
  for (Complex z : torus_points(t, 10)) {
    const Complex lambda = df(z) / f10(z);
    EXPECT_NEAR(lambda.real(), -kPi, 1e-10);
    EXPECT_NEAR(lambda.imag(), 0.0, 1e-12);
  }
}

TEST(Laplacian, MatchesIndependentStencil) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const Observable f = parse_observable(s, "x1*x3 + x2^3");
  const Observable d = laplacian(s, f);
  const oracle::Fn fn = [&](Complex z) { return f(z); };
  for (Complex z : sphere_points(10)) {
    EXPECT_NEAR(std::abs(d(z) - oracle::d_z_zbar(fn, z) / s.kahler_density(z)), 0.0, 1e-6);
  }
}

TEST(Laplacian, SelfAdjointUnderQuadrature) {
  const KahlerModel s = make_model(ModelKind::Sphere);
  const KahlerModel t = make_model(ModelKind::Torus, Complex(0.2, 1.0));
  auto defect = [](const KahlerModel& model, const Observable& f, const Observable& g) {
    const QuadratureRule rule = build_quadrature(model, 48);
    const Observable df = laplacian(model, f), dg = laplacian(model, g);
    const Complex a = integrate(rule, [&](Complex z) { return f(z) * dg(z); });
    const Complex b = integrate(rule, [&](Complex z) { return df(z) * g(z); });
    return std::abs(a - b);
  };
  EXPECT_LT(defect(s, parse_observable(s, "x1*x3"), parse_observable(s, "x3^2 + x2")), 1e-8);
  EXPECT_LT(defect(s, sphere_coordinate(s, 1), parse_observable(s, "x1^3")), 1e-8);
  EXPECT_LT(defect(t, parse_observable(t, "re(f(1,0))"), parse_observable(t, "re(f(1,0)) * im(f(0,1))")), 1e-8);
}

