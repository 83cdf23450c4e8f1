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
#include "btq/coherent.hpp"
#include "helpers.hpp"

using namespace btq;

namespace {

const KahlerModel kSphere = make_model(ModelKind::Sphere);
const KahlerModel kSquare = make_model(ModelKind::Torus, Complex(0.0, 1.0));
const KahlerModel kSkew = make_model(ModelKind::Torus, Complex(0.3, 0.9));

std::vector<ChartPoint> sample(const KahlerModel& model, int count, unsigned seed = 11) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ChartPoint> out;
  for (int i = 0; i < count; ++i) {
    const double a = unit(rng), b = unit(rng);
    out.push_back({model.is_sphere() ? std::polar(3.0 * a, 2.0 * kPi * b) : model.from_lattice(a, b)});
  }
  return out;
}

CVector unit_vector(int dim, int j) {
  CVector e = CVector::Zero(dim);
  e(j) = 1.0;
  return e;
}

}  // namespace

TEST(Coherent, SphereOrigin) {
  const Level level = make_level(kSphere, 5);
  const CoherentVector e = coherent_vector(level.frame, {0.0});
  EXPECT_GT(std::abs(e.coeffs(0)), 0.1);
  for (int j = 1; j <= 5; ++j) EXPECT_LT(std::abs(e.coeffs(j)), 1e-15);
}

TEST(Coherent, SphereLevelOneAtOne) {
  const Level level = make_level(kSphere, 1);
  const CoherentVector e = coherent_vector(level.frame, {1.0});
  EXPECT_NEAR(std::abs(e.coeffs(0) - e.coeffs(1)), 0.0, 1e-15);
  EXPECT_NEAR(e.coeffs.norm(), std::sqrt(1.0 / kPi), 1e-14);
}

TEST(Coherent, AnchorPhaseLaw) {
  const Complex c = std::polar(1.0, 0.7);
  for (const KahlerModel& model : {kSphere, kSkew}) {
    const int m = 5;
    const Level level = make_level(model, m);
    const OperatorMatrix t = toeplitz(level, model.is_sphere() ? sphere_coordinate(model, 1) : fourier_mode(model, 1, 0));
    for (const ChartPoint& x : sample(model, 5)) {
      const CoherentVector e = coherent_vector(level.frame, x);
      const CoherentVector ec = coherent_vector(level.frame, x, c);
      EXPECT_LT((ec.coeffs - std::pow(std::conj(c), m) * e.coeffs).norm(), 1e-13);
      EXPECT_NEAR(std::abs(covariant_symbol(t, ec) - covariant_symbol(t, e)), 0.0, 1e-13);
      EXPECT_NEAR(std::abs(overlap(ec, ec) - overlap(e, e)), 0.0, 1e-13);
    }
  }
}

TEST(Coherent, ReproducingProperty) {
  for (const KahlerModel& model : {kSphere, kSkew}) {
    const Level level = make_level(model, 6);
    for (const ChartPoint& x : sample(model, 50)) {
      const CoherentVector e = coherent_vector(level.frame, x);
      const CVector psi = level.frame.orthonormal_values(x.z);
      for (int k = 0; k < level.dim(); ++k) {
        const Complex value = inner_product(level.table, e.coeffs, unit_vector(level.dim(), k));
        EXPECT_NEAR(std::abs(value - psi(k)), 0.0, 1e-10);
      }
    }
  }
}

TEST(Bergman, SphereDiagonalIsConstant) {
  for (int m : {1, 4, 20}) {
    const Level level = make_level(kSphere, m);
    for (const ChartPoint& x : sample(kSphere, 20)) {
      EXPECT_NEAR(bergman_diagonal(level.frame, x), (m + 1) / (2.0 * kPi), 1e-12);
      EXPECT_NEAR(std::abs(bergman_kernel(level.frame, x, x) - (m + 1) / (2.0 * kPi)), 0.0, 1e-12);
    }
  }
}

TEST(Bergman, TwoPointSymmetryAndDecay) {
  for (const KahlerModel& model : {kSphere, kSkew}) {
    const Level level = make_level(model, 5);
    const auto pts = sample(model, 6);
    for (const ChartPoint& x : pts) {
      for (const ChartPoint& y : pts) {
        EXPECT_NEAR(two_point_modulus(level.frame, x, y), two_point_modulus(level.frame, y, x), 1e-12);
        const Complex bxy = bergman_kernel(level.frame, x, y), byx = bergman_kernel(level.frame, y, x);
        EXPECT_NEAR(std::abs(bxy - std::conj(byx)), 0.0, 1e-13);
      }
    }
  }
  const Level m1 = make_level(kSphere, 1);
  EXPECT_LT(std::abs(bergman_kernel(m1.frame, {0.0}, {1e3})), 1e-3);
}

TEST(Symbols, Examples) {
  for (int m : {2, 7}) {
    const Level level = make_level(kSphere, m);
    const Observable x3 = sphere_coordinate(kSphere, 3);
    const OperatorMatrix t3 = toeplitz(level, x3);
    const OperatorMatrix id = identity_operator(level);
    const OperatorMatrix a = toeplitz(level, parse_observable(kSphere, "x1")) * t3;
    for (const ChartPoint& x : sample(kSphere, 10)) {
      EXPECT_NEAR(std::abs(covariant_symbol(level.frame, id, x) - 1.0), 0.0, 1e-13);
      EXPECT_NEAR(std::abs(covariant_symbol(level.frame, t3, x) - double(m) / (m + 2) * x3(x.z)), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(covariant_symbol(level.frame, a.adjoint(), x) -
                           std::conj(covariant_symbol(level.frame, a, x))),
                  0.0, 1e-13);
      EXPECT_NEAR(std::abs(two_point_symbol(level.frame, a, x, x) - covariant_symbol(level.frame, a, x)), 0.0, 1e-12);
    }
  }
}

TEST(Symbols, HermitianSymbolsAreReal) {
  const Level level = make_level(kSkew, 6);
  const OperatorMatrix t = toeplitz(level, parse_observable(kSkew, "re(f(1,1)) * im(f(0,1))"));
  const SymbolField field = covariant_symbol_field(level.frame, t);
  for (const ChartPoint& x : sample(kSkew, 20)) EXPECT_LT(std::abs(field(x).imag()), 1e-10);
}

TEST(Symbols, KernelZero) {
  // e_0 and e_infinity are orthogonal at level 1 up to the decay of h.
  const Level level = make_level(kSphere, 1);
  const OperatorMatrix id = identity_operator(level);
  EXPECT_BTQ_ERROR(two_point_symbol(level.frame, id, {0.0}, {1e13}), ErrorCode::KernelZero);
}

TEST(Symbols, LevelMismatch) {
  const Level a = make_level(kSphere, 3), b = make_level(kSphere, 4);
  EXPECT_BTQ_ERROR(covariant_symbol(a.frame, identity_operator(b), {0.5}), ErrorCode::DimensionMismatch);
}

TEST(Symbols, Injectivity) {
  for (const KahlerModel& model : {kSphere, kSkew}) {
    const Level level = make_level(model, 4);
    const int dim = level.dim();
    const auto pts = sample(model, 2 * dim * dim, 5);
    CMatrix design(static_cast<Eigen::Index>(pts.size()), dim * dim);
    for (size_t p = 0; p < pts.size(); ++p) {
      const CoherentVector e = coherent_vector(level.frame, pts[p]);
      for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
          // sigma(E_jk) = conj(e_j) e_k / |e|^2.
          design(static_cast<Eigen::Index>(p), j * dim + k) = std::conj(e.coeffs(j)) * e.coeffs(k) / e.coeffs.squaredNorm();
        }
      }
    }
    Eigen::JacobiSVD<CMatrix> svd(design);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > 1e-10 * s(0);
    EXPECT_EQ(rank, dim * dim);
  }
}

TEST(Epsilon, SphereConstant) {
  for (int m : {1, 6, 25}) {
    const Level level = make_level(kSphere, m);
    double lo = 1e300, hi = -1e300;
    for (const ChartPoint& x : sample(kSphere, 50)) {
      const EpsilonRoutes r = epsilon_routes(level, x);
      EXPECT_NEAR(r.basis_route, r.definition_route, 1e-10);
      lo = std::min(lo, r.basis_route);
      hi = std::max(hi, r.basis_route);
    }
    EXPECT_LT(hi - lo, 1e-10);
    EXPECT_NEAR(lo, (m + 1) / (2.0 * kPi), 1e-10);
  }
}

TEST(Epsilon, IntegratesToDimension) {
  for (const KahlerModel& model : {kSphere, kSquare, kSkew}) {
    for (int m : {1, 3, 10}) {
      const Level level = make_level(model, m);
      const RVector eps = epsilon_on_nodes(level);
      EXPECT_GT(eps.minCoeff(), 0.0);
      EXPECT_NEAR(eps.dot(level.table.weights), double(level.dim()), 1e-9);
    }
  }
}

TEST(Epsilon, TorusHalfTranslation) {
  const Level level = make_level(kSquare, 2);
  for (const ChartPoint& x : sample(kSquare, 10)) {
    EXPECT_NEAR(epsilon(level, x), epsilon(level, {x.z + 0.5}), 1e-8);
    EXPECT_NEAR(epsilon_routes(level, x).basis_route, epsilon_routes(level, x).definition_route, 1e-10);
  }
}

TEST(Berezin, Examples) {
  const int m = 4;
  const Level s = make_level(kSphere, m);
  const Observable x3 = sphere_coordinate(kSphere, 3);
  const Level t = make_level(kSquare, m);
  const Observable f10 = fourier_mode(kSquare, 1, 0);
  for (const ChartPoint& x : sample(kSphere, 8)) {
    EXPECT_NEAR(std::abs(berezin_transform(s, x3, x, BerezinMethod::Symbol) - double(m) / (m + 2) * x3(x.z)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(berezin_transform(s, x3, x, BerezinMethod::Integral) - double(m) / (m + 2) * x3(x.z)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(berezin_transform(s, constant_observable(1.0), x, BerezinMethod::Integral) - 1.0), 0.0, 1e-10);
  }
  for (const ChartPoint& x : sample(kSquare, 8)) {
    const Complex a = berezin_transform(t, f10, x, BerezinMethod::Symbol);
    const Complex b = berezin_transform(t, f10, x, BerezinMethod::Integral);
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(berezin_transform(t, constant_observable(1.0), x, BerezinMethod::Symbol) - 1.0), 0.0, 1e-12);
  }
}

TEST(Contravariant, Reconstruction) {
  const Level s = make_level(kSphere, 3);
  const CMatrix a = contravariant_reconstruct(s, sphere_coordinate(kSphere, 3)).entries;
  for (int j = 0; j <= 3; ++j) {
    for (int k = 0; k <= 3; ++k) {
      EXPECT_NEAR(std::abs(a(j, k) - (j == k ? (3.0 - 2 * j) / 5.0 : 0.0)), 0.0, 1e-8);
    }
  }
  const Level t = make_level(kSquare, 3);
  const Observable f10 = fourier_mode(kSquare, 1, 0);
  EXPECT_LT((contravariant_reconstruct(t, f10).entries - toeplitz(t, f10).entries).cwiseAbs().maxCoeff(), 1e-8);
  for (const Level* level : {&s, &t}) {
    const CMatrix id = contravariant_reconstruct(*level, constant_observable(1.0)).entries;
    EXPECT_LT((id - CMatrix::Identity(level->dim(), level->dim())).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(TraceAndAdjointness, Examples) {
  for (int m : {2, 8}) {
    const Level level = make_level(kSphere, m);
    EXPECT_NEAR(std::abs(trace_via_symbol(level, identity_operator(level)) - double(m + 1)), 0.0, 1e-9);
    const OperatorMatrix t3 = toeplitz(level, sphere_coordinate(kSphere, 3));
    EXPECT_NEAR(std::abs(trace_via_symbol(level, t3)), 0.0, 1e-9);
    EXPECT_LT(adjointness_check(level, t3, sphere_coordinate(kSphere, 1)), 1e-8);
  }
  const Level t = make_level(kSkew, 5);
  const OperatorMatrix a = toeplitz(t, fourier_mode(kSkew, 1, 0)) * toeplitz(t, fourier_mode(kSkew, 0, 1));
  EXPECT_NEAR(std::abs(trace_via_symbol(t, a) - trace(a)), 0.0, 1e-9);
  EXPECT_LT(adjointness_check(t, a, parse_observable(kSkew, "re(f(1,1))")), 1e-8);
}

TEST(TwistedProduct, Examples) {
  const int m = 6;
  const Level level = make_level(kSphere, m);
  const Observable x1 = sphere_coordinate(kSphere, 1), x2 = sphere_coordinate(kSphere, 2), x3 = sphere_coordinate(kSphere, 3);
  for (const ChartPoint& x : sample(kSphere, 6)) {
    const TwistedProduct unit = twisted_product(level, constant_observable(1.0), x1, x);
    EXPECT_NEAR(std::abs(unit.matrix_route - berezin_transform(level, x1, x, BerezinMethod::Symbol)), 0.0, 1e-12);
    const TwistedProduct p = twisted_product(level, x3, x1, x);
    EXPECT_NEAR(std::abs(p.matrix_route - p.integral_route), 0.0, 1e-7);
    // [T_x3, T_x1] = -(2i/(m+2)) T_x2 and sigma(T_x2) = (m/(m+2)) x2.
    const TwistedProduct q = twisted_product(level, x1, x3, x);
    const Complex expected = Complex(0.0, -2.0) * double(m) / ((m + 2.0) * (m + 2.0)) * x2(x.z);
    EXPECT_NEAR(std::abs(p.matrix_route - q.matrix_route - expected), 0.0, 1e-12);
  }
}

TEST(TwistedProduct, CommutatorApproachesBracket) {
  const Observable f = parse_observable(kSphere, "x1*x3"), g = parse_observable(kSphere, "x2 + x3^2");
  const Observable bracket = poisson_bracket(kSphere, f, g);
  const ChartPoint x{Complex(0.4, 0.3)};
  std::vector<double> errors;
  for (int m : {8, 16, 32}) {
    const Level level = make_level(kSphere, m);
    const Complex diff = twisted_product(level, f, g, x).matrix_route - twisted_product(level, g, f, x).matrix_route;
    errors.push_back(std::abs(double(m) * diff + Complex(0.0, 1.0) * bracket(x.z)));
  }
  // O(1/m): the error halves with each doubling, give or take.
  EXPECT_LT(errors[1], 0.7 * errors[0]);
  EXPECT_LT(errors[2], 0.7 * errors[1]);
}

TEST(Embedding, Examples) {
  const Level m1 = make_level(kSphere, 1);
  const CVector p = embedding_point(m1.frame, {0.0});
  EXPECT_GT(std::abs(p(0)), 0.0);
  EXPECT_LT(std::abs(p(1)), 1e-15 * std::abs(p(0)));
  for (int m : {2, 9}) {
    const Level level = make_level(kSphere, m);
    std::vector<ChartPoint> pts = sample(kSphere, 10);
    for (double r : {0.999, 1.001, 20.0, 300.0, 1e4}) pts.push_back({std::polar(r, 1.3)});
    for (const ChartPoint& x : pts) {
      EXPECT_NEAR(pullback_fs_density(level.frame, x) / (m * kSphere.kahler_density(x.z)), 1.0, 1e-6) << x.z;
    }
  }
}

TEST(Embedding, TorusCorrectionHasZeroMean) {
  const int m = 4;
  const Level level = make_level(kSquare, m);
  const int n = 16;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const ChartPoint x{kSquare.from_lattice((i + 0.5) / n, (k + 0.5) / n)};
      mean += pullback_fs_density(level.frame, x) - m * kSquare.kahler_density(x.z);
    }
  }
  mean /= n * n;
  EXPECT_NEAR(mean * 2.0 * kSquare.tau().imag(), 0.0, 1e-6);
}
