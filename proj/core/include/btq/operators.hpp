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

#ifndef BTQ_OPERATORS_HPP
#define BTQ_OPERATORS_HPP

#include <string>

#include "btq/kahler_model.hpp"
#include "btq/observable.hpp"
#include "btq/quadrature.hpp"
#include "btq/section_space.hpp"
#include "btq/types.hpp"

namespace btq {

/// An endomorphism of the level-m section space in the orthonormal frame.
struct OperatorMatrix {
  KahlerModel model;
  int level = 0;
  CMatrix entries;
  std::string label;

  Eigen::Index dim() const noexcept { return entries.rows(); }
  OperatorMatrix adjoint() const;
};

/// Identity at the given level.
OperatorMatrix identity_operator(const Level& level);

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(Complex c, const OperatorMatrix& a);
/// [a, b] = ab - ba.
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// Throws UnderResolved unless the rule resolves level m (sphere: resolution
/// >= 2m + 8, torus: grid >= 4m).
void require_resolved(const KahlerModel& model, const QuadratureRule& rule, int m);

/// T_f[i, j] = <sigma_i, f sigma_j>, the compression of multiplication by f.
OperatorMatrix toeplitz(const Level& level, const Observable& f);
OperatorMatrix toeplitz(const OrthonormalFrame& frame, const QuadratureRule& rule, const Observable& f);

/// Q_f = Pi P_f with P_f = nabla_{X_f^(m)} + i f, where m omega(X_f^(m), .) = df,
/// i.e. X_f^(m) = (i / (m g)) (-dbar f d_z + d f d_zbar). Needs the first
/// derivative oracles of f (OracleMissing otherwise).
OperatorMatrix geometric_quantization(const Level& level, const Observable& f);
OperatorMatrix geometric_quantization(const OrthonormalFrame& frame, const QuadratureRule& rule,
                                      const Observable& f);

/// || Q_f - i T_{f - c Delta f / (2m)} || in operator norm.
double tuynman_residual(const Level& level, const Observable& f, double c);

/// Largest singular value.
double operator_norm(const OperatorMatrix& a);
double operator_norm(const CMatrix& a);
Complex trace(const OperatorMatrix& a);
/// tr(A^* B), anti-linear in A. Throws DimensionMismatch.
Complex hs_inner(const OperatorMatrix& a, const OperatorMatrix& b);

}  // namespace btq

#endif  // BTQ_OPERATORS_HPP
