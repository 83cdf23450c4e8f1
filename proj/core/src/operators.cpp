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

#include "btq/operators.hpp"

#include "btq/calculus.hpp"
#include "btq/error.hpp"

namespace btq {

namespace {

void require_compatible(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.level != b.level || !(a.model == b.model) || a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "operators " + a.label + " and " + b.label + " live on different spaces");
  }
}

// Sum over nodes of weight * conj(Phi_ni) d_n Psi_nj.
CMatrix compress(const NodeTable& table, const CVector& density, const CMatrix& right) {
  CVector wd = table.weights.cast<Complex>().cwiseProduct(density);
  return table.values.adjoint() * (wd.asDiagonal() * right);
}

CVector sample(const NodeTable& table, const Observable& f) {
  CVector v(static_cast<Eigen::Index>(table.nodes.size()));
  for (size_t n = 0; n < table.nodes.size(); ++n) {
    const Complex value = f(table.nodes[n].z);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      throw Error(ErrorCode::NonFiniteIntegrand, f.label() + " not finite at a node");
    }
    v(static_cast<Eigen::Index>(n)) = value;
  }
  return v;
}

}  // namespace

OperatorMatrix OperatorMatrix::adjoint() const {
  return OperatorMatrix{model, level, entries.adjoint(), label + "^*"};
}

OperatorMatrix identity_operator(const Level& level) {
  return OperatorMatrix{level.model, level.m, CMatrix::Identity(level.dim(), level.dim()), "I"};
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_compatible(a, b);
  return OperatorMatrix{a.model, a.level, a.entries * b.entries, a.label + b.label};
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_compatible(a, b);
  return OperatorMatrix{a.model, a.level, a.entries + b.entries, "(" + a.label + "+" + b.label + ")"};
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_compatible(a, b);
  return OperatorMatrix{a.model, a.level, a.entries - b.entries, "(" + a.label + "-" + b.label + ")"};
}

OperatorMatrix operator*(Complex c, const OperatorMatrix& a) {
  return OperatorMatrix{a.model, a.level, c * a.entries, "c*" + a.label};
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_compatible(a, b);
  return OperatorMatrix{a.model, a.level, a.entries * b.entries - b.entries * a.entries,
                        "[" + a.label + "," + b.label + "]"};
}

void require_resolved(const KahlerModel& model, const QuadratureRule& rule, int m) {
  if (rule.kind != model.kind()) throw Error(ErrorCode::DimensionMismatch, "rule and model differ");
  const int needed = model.is_sphere() ? 2 * m + 8 : 4 * m;
  if (rule.resolution < needed) {
    throw Error(ErrorCode::UnderResolved, "resolution " + std::to_string(rule.resolution) +
                                              " does not resolve level " + std::to_string(m) +
                                              " (needs " + std::to_string(needed) + ")");
  }
}

OperatorMatrix toeplitz(const Level& level, const Observable& f) {
  require_resolved(level.model, level.rule, level.m);
  CMatrix t = compress(level.table, sample(level.table, f), level.table.values);
  return OperatorMatrix{level.model, level.m, std::move(t), "T[" + f.label() + "]"};
}

OperatorMatrix toeplitz(const OrthonormalFrame& frame, const QuadratureRule& rule, const Observable& f) {
  require_resolved(frame.model(), rule, frame.level());
  const NodeTable table = make_node_table(frame, rule);
  CMatrix t = compress(table, sample(table, f), table.values);
  return OperatorMatrix{frame.model(), frame.level(), std::move(t), "T[" + f.label() + "]"};
}

namespace {

OperatorMatrix geometric_quantization_impl(const KahlerModel& model, const OrthonormalFrame& frame,
                                           const NodeTable& table, const Observable& f) {
  if (!f.has_first_derivatives()) throw Error(ErrorCode::OracleMissing, "geometric quantization of " + f.label());
  const int m = frame.level();
  const auto count = static_cast<Eigen::Index>(table.nodes.size());
  CMatrix raw_connection(count, frame.dim());
  CVector flow(count);  // z-component of the Hamiltonian field X_f^(m)
  CVector mult(count);  // i f
  for (Eigen::Index n = 0; n < count; ++n) {
    const Complex z = table.nodes[static_cast<size_t>(n)].z;
    raw_connection.row(n) = frame.basis.weighted_connection_values(z).transpose();
    flow(n) = -kI * f.d_zbar(z) / (static_cast<double>(m) * model.kahler_density(z));
    mult(n) = kI * f(z);
  }
  const CMatrix connection = frame.to_orthonormal(raw_connection);
  CMatrix q = compress(table, flow, connection) + compress(table, mult, table.values);
  return OperatorMatrix{model, m, std::move(q), "Q[" + f.label() + "]"};
}

}  // namespace

OperatorMatrix geometric_quantization(const Level& level, const Observable& f) {
  require_resolved(level.model, level.rule, level.m);
  return geometric_quantization_impl(level.model, level.frame, level.table, f);
}

OperatorMatrix geometric_quantization(const OrthonormalFrame& frame, const QuadratureRule& rule,
                                      const Observable& f) {
  require_resolved(frame.model(), rule, frame.level());
  return geometric_quantization_impl(frame.model(), frame, make_node_table(frame, rule), f);
}

double tuynman_residual(const Level& level, const Observable& f, double c) {
  const OperatorMatrix q = geometric_quantization(level, f);
  const Observable shifted = f - Complex{c / (2.0 * level.m), 0.0} * laplacian(level.model, f);
  const OperatorMatrix t = toeplitz(level, shifted);
  return operator_norm(q.entries - kI * t.entries);
}

double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

double operator_norm(const OperatorMatrix& a) { return operator_norm(a.entries); }

Complex trace(const OperatorMatrix& a) { return a.entries.trace(); }

Complex hs_inner(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_compatible(a, b);
  return (a.entries.adjoint() * b.entries).trace();
}

}  // namespace btq
