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

#ifndef BTQ_SECTION_SPACE_HPP
#define BTQ_SECTION_SPACE_HPP

#include <vector>

#include "btq/kahler_model.hpp"
#include "btq/quadrature.hpp"
#include "btq/types.hpp"

namespace btq {

/// Holomorphic sections of the level-m bundle as chart functions.
///
/// Sphere: s_j(z) = z^j, j = 0..m. Torus: level-m theta functions with
/// characteristic j/m, j = 0..m-1,
///   s_j(z) = sum_n exp(pi i tau m a^2 + 2 pi i m a z),  a = n + j/m,
/// truncated to |n - n0| <= cutoff around the Gaussian centre n0.
class SectionBasis {
 public:
  SectionBasis(KahlerModel model, int level, int extra_cutoff = 0);

  const KahlerModel& model() const noexcept { return model_; }
  int level() const noexcept { return level_; }
  int dim() const noexcept { return dim_; }
  int theta_cutoff() const noexcept { return cutoff_; }

  /// Chart value s_j(z) at z as given (no reduction).
  Complex basis_eval(int j, Complex z) const;
  /// h(z)^m.
  double weight(Complex z) const;

  /// h^{m/2}(z) s_j(z) for all j, evaluated stably. Torus points are first
  /// reduced to the fundamental domain, which changes these values by a
  /// common unimodular factor only.
  CVector weighted_values(Complex z) const;
  /// h^{m/2}(z) (d s_j + m (d log h) s_j), the holomorphic-frame form of the
  /// Chern connection, in the same gauge as weighted_values().
  CVector weighted_connection_values(Complex z) const;

 private:
  KahlerModel model_;
  int level_;
  int dim_;
  int cutoff_;
};

/// Throws LevelInvalid for m < 1.
SectionBasis build_basis(const KahlerModel& model, int m, int extra_cutoff = 0);

enum class GramMode { Quadrature, ClosedForm };

/// G[j,k] = integral of h^m conj(s_j) s_k Omega.
///
/// ClosedForm exists on the sphere only: G = diag(2 pi j!(m-j)!/(m+1)!).
/// A quadrature Gram on the sphere is cross-checked against it and raises
/// UnderResolved on disagreement. Throws NotPositiveDefinite when the
/// Cholesky factorization fails.
CMatrix gram_matrix(const SectionBasis& basis, const QuadratureRule& rule, GramMode mode);

/// Closed-form sphere Gram diagonal entry 2 pi j!(m-j)!/(m+1)!.
double sphere_gram_entry(int m, int j);

/// Orthonormal sections sigma_k = sum_j C[j,k] s_j with C^* G C = I.
struct OrthonormalFrame {
  SectionBasis basis;
  CMatrix gram;
  /// Upper Cholesky factor R, G = R^* R.
  CMatrix upper;
  /// C = R^{-1}.
  CMatrix transform;

  int dim() const noexcept { return basis.dim(); }
  int level() const noexcept { return basis.level(); }
  const KahlerModel& model() const noexcept { return basis.model(); }

  /// psi_k(z) = h^{m/2} sigma_k(z).
  CVector orthonormal_values(Complex z) const;
  CVector orthonormal_connection_values(Complex z) const;
  /// Maps row-stacked raw weighted values (points x dim) to orthonormal ones.
  CMatrix to_orthonormal(const CMatrix& raw_rows) const;
};

/// C is the inverse of the upper Cholesky factor, basis order ascending.
/// The factorization runs on the diagonally scaled Gram. Throws
/// NotPositiveDefinite.
OrthonormalFrame orthonormalize(const SectionBasis& basis, const CMatrix& gram);

/// Orthonormal sections sampled on the nodes of a rule.
struct NodeTable {
  std::vector<ChartPoint> nodes;
  RVector weights;
  /// values(n, k) = psi_k(node n).
  CMatrix values;
};

NodeTable make_node_table(const OrthonormalFrame& frame, const QuadratureRule& rule);

/// <a, b> for coefficient vectors in the orthonormal frame, computed by
/// quadrature; anti-linear in a. Throws DimensionMismatch.
Complex inner_product(const OrthonormalFrame& frame, const QuadratureRule& rule, const CVector& a,
                      const CVector& b);
Complex inner_product(const NodeTable& table, const CVector& a, const CVector& b);

/// Everything needed at one level: rule, frame and the sampled frame.
struct Level {
  KahlerModel model;
  int m;
  QuadratureRule rule;
  OrthonormalFrame frame;
  NodeTable table;

  int dim() const noexcept { return frame.dim(); }
};

/// Quadrature resolution used at level m when none is given: 2m + 16 on the sphere,
/// max(32, 4m + 16) on the torus.
int default_resolution(const KahlerModel& model, int m);

Level make_level(const KahlerModel& model, int m, int resolution = 0,
                 GramMode mode = GramMode::Quadrature);

}  // namespace btq

#endif  // BTQ_SECTION_SPACE_HPP
