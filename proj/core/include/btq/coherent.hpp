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

#ifndef BTQ_COHERENT_HPP
#define BTQ_COHERENT_HPP

#include <functional>

#include "btq/observable.hpp"
#include "btq/operators.hpp"
#include "btq/section_space.hpp"
#include "btq/types.hpp"

namespace btq {

/// Coherent vector e_x of level m in orthonormal-frame coordinates.
///
/// Anchored at a unit-norm covector over x, so coeffs[j] = conj(psi_j(x))
/// with psi_j = h^{m/2} sigma_j, and <e_x, s> = psi_s(x). Scaling the anchor
/// by a unimodular c multiplies the coefficients by conj(c)^m.
struct CoherentVector {
  int level = 0;
  ChartPoint anchor;
  Complex anchor_phase{1.0, 0.0};
  CVector coeffs;
};

CoherentVector coherent_vector(const OrthonormalFrame& frame, ChartPoint x,
                               Complex anchor_phase = Complex{1.0, 0.0});

/// <a, b> of two coherent vectors.
Complex overlap(const CoherentVector& a, const CoherentVector& b);

/// B_m(x, y) = <e_x, e_y>.
Complex bergman_kernel(const OrthonormalFrame& frame, ChartPoint x, ChartPoint y);
/// u_m(x) = B_m(x, x).
double bergman_diagonal(const OrthonormalFrame& frame, ChartPoint x);
/// v_m(x, y) = B_m(x, y) B_m(y, x).
double two_point_modulus(const OrthonormalFrame& frame, ChartPoint x, ChartPoint y);

/// sigma(A)(x) = <e_x, A e_x> / <e_x, e_x>.
Complex covariant_symbol(const OperatorMatrix& a, const CoherentVector& e);
Complex covariant_symbol(const OrthonormalFrame& frame, const OperatorMatrix& a, ChartPoint x);

/// Two-point denominators below this fraction of u_m(x) count as vanishing.
inline constexpr double kKernelFloor = 1e-12;

/// sigma(A)(x, y) = <e_x, A e_y> / <e_x, e_y>. Throws KernelZero when
/// |<e_x, e_y>| <= kKernelFloor * u_m(x).
Complex two_point_symbol(const OrthonormalFrame& frame, const OperatorMatrix& a, ChartPoint x,
                         ChartPoint y);

/// A pointwise-computable function attached to a level.
struct SymbolField {
  int level = 0;
  std::function<Complex(ChartPoint)> eval;

  Complex operator()(ChartPoint p) const { return eval(p); }
};

SymbolField covariant_symbol_field(const OrthonormalFrame& frame, const OperatorMatrix& a);

struct EpsilonRoutes {
  /// sum_j h^m |s_j^ON|^2.
  double basis_route;
  /// h(e_x, e_x)(x) / <e_x, e_x>, with the norm taken by quadrature.
  double definition_route;
};

EpsilonRoutes epsilon_routes(const Level& level, ChartPoint x);
/// Rawnsley's epsilon; both routes are computed and must agree to 1e-10
/// relative (UnderResolved otherwise).
double epsilon(const Level& level, ChartPoint x);
/// epsilon at every node of the level's rule.
RVector epsilon_on_nodes(const Level& level);

enum class BerezinMethod { Symbol, Integral };

/// I^(m)(f)(x): sigma(T_f)(x), or (1/u_m(x)) * integral of v_m(x, y) f(y) Omega(y).
Complex berezin_transform(const Level& level, const Observable& f, ChartPoint x, BerezinMethod method);
Complex berezin_transform(const Level& level, const OperatorMatrix& toeplitz_f, ChartPoint x);
/// sigma(A) at every node.
CVector symbol_on_nodes(const Level& level, const OperatorMatrix& a);

/// integral of f(x) P_x epsilon(x) Omega(x), assembled node by node from
/// coherent projectors.
OperatorMatrix contravariant_reconstruct(const Level& level, const Observable& f);

/// integral of sigma(A) epsilon Omega.
Complex trace_via_symbol(const Level& level, const OperatorMatrix& a);
/// |<A, T_f>_HS - integral of conj(sigma(A)) f epsilon Omega|.
double adjointness_check(const Level& level, const OperatorMatrix& a, const Observable& f);

struct TwistedProduct {
  /// sigma(T_f T_g)(x).
  Complex matrix_route;
  /// Two-point-symbol composition integral.
  Complex integral_route;
  /// Upper bound on the contribution of nodes skipped below the kernel floor.
  double skipped_mass = 0.0;
  int skipped_nodes = 0;
};

/// R^(m)(f, g)(x) by both routes. Throws KernelZero if the skipped mass
/// exceeds the rule tolerance.
TwistedProduct twisted_product(const Level& level, const Observable& f, const Observable& g, ChartPoint x);
TwistedProduct twisted_product(const Level& level, const OperatorMatrix& tf, const OperatorMatrix& tg,
                               ChartPoint x);

/// Projective coordinates (psi_0(x) : ... : psi_N(x)) of the coherent-state
/// embedding, normalized to unit length.
CVector embedding_point(const OrthonormalFrame& frame, ChartPoint x);

/// p(x) with (pullback of omega_FS) = p(x) i dz ^ dzbar, computed as
/// m g(z) + d dbar log u_m(z) with a 9-point stencil of step
/// 1e-4 * max(1, |z|). Throws NonFiniteLog if u_m is not positive.
double pullback_fs_density(const OrthonormalFrame& frame, ChartPoint x);

}  // namespace btq

#endif  // BTQ_COHERENT_HPP
