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

#include "btq/coherent.hpp"

#include <cmath>

#include "btq/error.hpp"

namespace btq {

namespace {

void require_level(const OrthonormalFrame& frame, const OperatorMatrix& a) {
  if (a.level != frame.level() || a.dim() != frame.dim() || !(a.model == frame.model())) {
    throw Error(ErrorCode::DimensionMismatch, a.label + " does not act on this frame");
  }
}

}  // namespace

CoherentVector coherent_vector(const OrthonormalFrame& frame, ChartPoint x, Complex anchor_phase) {
  const CVector psi = frame.orthonormal_values(x.z);
  const Complex factor = std::pow(std::conj(anchor_phase), frame.level());
  CoherentVector e{frame.level(), x, anchor_phase, factor * psi.conjugate()};
  if (!(e.coeffs.squaredNorm() > 0.0)) {
    throw Error(ErrorCode::KernelZero, "coherent vector vanishes");
  }
  return e;
}

Complex overlap(const CoherentVector& a, const CoherentVector& b) { return a.coeffs.dot(b.coeffs); }

Complex bergman_kernel(const OrthonormalFrame& frame, ChartPoint x, ChartPoint y) {
  return overlap(coherent_vector(frame, x), coherent_vector(frame, y));
}

double bergman_diagonal(const OrthonormalFrame& frame, ChartPoint x) {
  return frame.orthonormal_values(x.z).squaredNorm();
}

double two_point_modulus(const OrthonormalFrame& frame, ChartPoint x, ChartPoint y) {
  const CoherentVector ex = coherent_vector(frame, x);
  const CoherentVector ey = coherent_vector(frame, y);
  return (overlap(ex, ey) * overlap(ey, ex)).real();
}

Complex covariant_symbol(const OperatorMatrix& a, const CoherentVector& e) {
  if (a.level != e.level || a.dim() != e.coeffs.size()) {
    throw Error(ErrorCode::DimensionMismatch, a.label + " and coherent vector differ in level");
  }
  return e.coeffs.dot(a.entries * e.coeffs) / e.coeffs.squaredNorm();
}

Complex covariant_symbol(const OrthonormalFrame& frame, const OperatorMatrix& a, ChartPoint x) {
  require_level(frame, a);
  return covariant_symbol(a, coherent_vector(frame, x));
}

Complex two_point_symbol(const OrthonormalFrame& frame, const OperatorMatrix& a, ChartPoint x, ChartPoint y) {
  require_level(frame, a);
  const CoherentVector ex = coherent_vector(frame, x);
  const CoherentVector ey = coherent_vector(frame, y);
  const Complex kernel = overlap(ex, ey);
  if (std::abs(kernel) <= kKernelFloor * ex.coeffs.squaredNorm()) {
    throw Error(ErrorCode::KernelZero, "two-point denominator below the kernel floor");
  }
  return ex.coeffs.dot(a.entries * ey.coeffs) / kernel;
}

SymbolField covariant_symbol_field(const OrthonormalFrame& frame, const OperatorMatrix& a) {
  require_level(frame, a);
  return SymbolField{frame.level(), [frame, a](ChartPoint p) { return covariant_symbol(a, coherent_vector(frame, p)); }};
}

EpsilonRoutes epsilon_routes(const Level& level, ChartPoint x) {
  const CVector psi = level.frame.orthonormal_values(x.z);
  const CoherentVector e = coherent_vector(level.frame, x);
  // Pointwise metric norm of e_x as a section: |sum_j coeff_j psi_j(x)|^2.
  const double pointwise = std::norm(psi.dot(e.coeffs.conjugate()));
  const double hilbert = inner_product(level.table, e.coeffs, e.coeffs).real();
  return EpsilonRoutes{psi.squaredNorm(), pointwise / hilbert};
}

double epsilon(const Level& level, ChartPoint x) {
  const EpsilonRoutes r = epsilon_routes(level, x);
  if (std::abs(r.basis_route - r.definition_route) > 1e-10 * r.basis_route) {
    throw Error(ErrorCode::UnderResolved, "epsilon routes disagree");
  }
  return r.basis_route;
}

RVector epsilon_on_nodes(const Level& level) { return level.table.values.rowwise().squaredNorm(); }

CVector symbol_on_nodes(const Level& level, const OperatorMatrix& a) {
  require_level(level.frame, a);
  const CMatrix& phi = level.table.values;
  // With c = conj(phi_n)^T: c^* A c = phi_n A phi_n^H.
  const CMatrix pa = phi * a.entries;
  const CVector num = pa.cwiseProduct(phi.conjugate()).rowwise().sum();
  return num.cwiseQuotient(phi.rowwise().squaredNorm().cast<Complex>());
}

Complex berezin_transform(const Level& level, const OperatorMatrix& toeplitz_f, ChartPoint x) {
  return covariant_symbol(level.frame, toeplitz_f, x);
}

Complex berezin_transform(const Level& level, const Observable& f, ChartPoint x, BerezinMethod method) {
  if (method == BerezinMethod::Symbol) return berezin_transform(level, toeplitz(level, f), x);
  require_resolved(level.model, level.rule, level.m);
  const CVector psi = level.frame.orthonormal_values(x.z);
  const CVector kernel = level.table.values.conjugate() * psi;  // B_m(x, y_n)
  Complex acc{};
  for (Eigen::Index n = 0; n < kernel.size(); ++n) {
    acc += level.table.weights(n) * std::norm(kernel(n)) * f(level.table.nodes[static_cast<size_t>(n)].z);
  }
  return acc / psi.squaredNorm();
}

OperatorMatrix contravariant_reconstruct(const Level& level, const Observable& f) {
  require_resolved(level.model, level.rule, level.m);
  const Eigen::Index dim = level.dim();
  CMatrix acc = CMatrix::Zero(dim, dim);
  for (size_t n = 0; n < level.rule.size(); ++n) {
    const CoherentVector e = coherent_vector(level.frame, level.rule.nodes[n]);
    const double norm2 = e.coeffs.squaredNorm();
    const CMatrix projector = e.coeffs * e.coeffs.adjoint() / norm2;
    acc += (level.rule.weights[n] * f(level.rule.nodes[n].z) * norm2) * projector;
  }
  return OperatorMatrix{level.model, level.m, std::move(acc), "contra[" + f.label() + "]"};
}

Complex trace_via_symbol(const Level& level, const OperatorMatrix& a) {
  const CVector sigma = symbol_on_nodes(level, a);
  const RVector eps = epsilon_on_nodes(level);
  Complex acc{};
  for (Eigen::Index n = 0; n < sigma.size(); ++n) acc += level.table.weights(n) * sigma(n) * eps(n);
  return acc;
}

double adjointness_check(const Level& level, const OperatorMatrix& a, const Observable& f) {
  const Complex hs = hs_inner(a, toeplitz(level, f));
  const CVector sigma = symbol_on_nodes(level, a);
  const RVector eps = epsilon_on_nodes(level);
  Complex acc{};
  for (Eigen::Index n = 0; n < sigma.size(); ++n) {
    acc += level.table.weights(n) * std::conj(sigma(n)) * f(level.table.nodes[static_cast<size_t>(n)].z) * eps(n);
  }
  return std::abs(hs - acc);
}

TwistedProduct twisted_product(const Level& level, const OperatorMatrix& tf, const OperatorMatrix& tg,
                               ChartPoint x) {
  require_level(level.frame, tf);
  require_level(level.frame, tg);
  TwistedProduct out;
  const CoherentVector ex = coherent_vector(level.frame, x);
  out.matrix_route = covariant_symbol(tf * tg, ex);

  const CMatrix& phi = level.table.values;
  const CVector psi = ex.coeffs.conjugate();
  const double ux = psi.squaredNorm();
  const CVector kernel = phi.conjugate() * psi;                              // <e_x, e_y>
  const CVector left = phi.conjugate() * (tf.entries.transpose() * psi);     // <e_x, T_f e_y>
  const CVector right = phi * (tg.entries * ex.coeffs);                      // <e_y, T_g e_x>
  const RVector uy = phi.rowwise().squaredNorm();
  Complex acc{};
  for (Eigen::Index n = 0; n < kernel.size(); ++n) {
    const double w = level.table.weights(n);
    if (std::abs(kernel(n)) <= kKernelFloor * ux) {
      out.skipped_mass += w * std::abs(left(n)) * std::abs(right(n)) / ux;
      ++out.skipped_nodes;
      continue;
    }
    const Complex sf = left(n) / kernel(n);
    const Complex sg = right(n) / std::conj(kernel(n));
    const double psi2 = std::norm(kernel(n)) / (ux * uy(n));
    acc += w * sf * sg * psi2 * uy(n);
  }
  out.integral_route = acc;
  if (out.skipped_mass > level.rule.tolerance) {
    throw Error(ErrorCode::KernelZero, "skipped quadrature mass exceeds tolerance");
  }
  return out;
}

TwistedProduct twisted_product(const Level& level, const Observable& f, const Observable& g, ChartPoint x) {
  return twisted_product(level, toeplitz(level, f), toeplitz(level, g), x);
}

CVector embedding_point(const OrthonormalFrame& frame, ChartPoint x) {
  const CVector psi = frame.orthonormal_values(x.z);
  return psi / psi.norm();
}

double pullback_fs_density(const OrthonormalFrame& frame, ChartPoint x) {
  const Complex z = x.z;
  // Far out on the sphere the stencil runs in the chart w = 1/z, where the
  // metric is not tiny; densities transform with |dw/dz|^2 = |z|^-4.
  const bool flip = frame.model().is_sphere() && std::abs(z) > 1.0;
  const Complex c0 = flip ? 1.0 / z : z;
  const double h = 1e-4 * std::max(1.0, std::abs(c0));
  auto log_u = [&](double dx, double dy) {
    const Complex p = c0 + Complex{dx, dy};
    const double u = frame.orthonormal_values(flip ? 1.0 / p : p).squaredNorm();
    if (!(u > 0.0) || !std::isfinite(u)) throw Error(ErrorCode::NonFiniteLog, "u_m not positive");
    return std::log(u);
  };
  const double c = log_u(0, 0);
  const double edges = log_u(h, 0) + log_u(-h, 0) + log_u(0, h) + log_u(0, -h);
  const double corners = log_u(h, h) + log_u(-h, h) + log_u(h, -h) + log_u(-h, -h);
  const double flat_laplacian = (4.0 * edges + corners - 20.0 * c) / (6.0 * h * h);
  const double density = frame.level() * frame.model().kahler_density(c0) + 0.25 * flat_laplacian;
  return flip ? density / (std::norm(z) * std::norm(z)) : density;
}

}  // namespace btq
