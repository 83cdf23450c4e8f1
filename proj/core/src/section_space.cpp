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

#include "btq/section_space.hpp"

#include <algorithm>
#include <cmath>

#include "btq/error.hpp"

namespace btq {

namespace {

int theta_cutoff_for(const KahlerModel& model, int m) {
  return static_cast<int>(std::ceil(4.0 / std::sqrt(m * model.tau().imag()))) + 4;
}

}  // namespace

SectionBasis::SectionBasis(KahlerModel model, int level, int extra_cutoff)
    : model_(model), level_(level) {
  if (level < 1) throw Error(ErrorCode::LevelInvalid, "level " + std::to_string(level) + " < 1");
  if (model_.is_sphere()) {
    dim_ = level + 1;
    cutoff_ = 0;
  } else {
    dim_ = level;
    cutoff_ = theta_cutoff_for(model_, level) + extra_cutoff;
  }
}

SectionBasis build_basis(const KahlerModel& model, int m, int extra_cutoff) {
  return SectionBasis(model, m, extra_cutoff);
}

double SectionBasis::weight(Complex z) const {
  return std::exp(level_ * model_.log_metric_weight(z));
}

Complex SectionBasis::basis_eval(int j, Complex z) const {
  if (j < 0 || j >= dim_) throw Error(ErrorCode::DimensionMismatch, "section index " + std::to_string(j));
  if (model_.is_sphere()) return std::pow(z, j);
  const Complex tau = model_.tau();
  const double m = level_;
  const double y = z.imag() / tau.imag();
  const int n0 = -static_cast<int>(std::lround(y));
  Complex acc{};
  for (int n = n0 - cutoff_; n <= n0 + cutoff_; ++n) {
    const double a = n + static_cast<double>(j) / m;
    acc += std::exp(kI * kPi * tau * m * a * a + 2.0 * kPi * kI * m * a * z);
  }
  return acc;
}

CVector SectionBasis::weighted_values(Complex z) const {
  CVector out(dim_);
  const double m = level_;
  if (model_.is_sphere()) {
    const double r = std::abs(z);
    if (r == 0.0) {
      out.setZero();
      out(0) = 1.0;
      return out;
    }
    const double log_r = std::log(r);
    const double half_log_s = 0.5 * m * std::log1p(r * r);
    const double phi = std::arg(z);
    for (int j = 0; j < dim_; ++j) out(j) = std::polar(std::exp(j * log_r - half_log_s), j * phi);
    return out;
  }
  const Complex tau = model_.tau();
  const auto [x, y] = model_.lattice_coords(model_.reduce({z}).z);
  const int n0 = -static_cast<int>(std::lround(y));
  for (int j = 0; j < dim_; ++j) {
    Complex acc{};
    for (int n = n0 - cutoff_; n <= n0 + cutoff_; ++n) {
      const double a = n + static_cast<double>(j) / m;
      const double s = a + y;
      const double modulus = std::exp(-kPi * m * tau.imag() * s * s);
      const double phase = kPi * m * tau.real() * a * a + 2.0 * kPi * m * a * (x + tau.real() * y);
      acc += std::polar(modulus, phase);
    }
    out(j) = acc;
  }
  return out;
}

CVector SectionBasis::weighted_connection_values(Complex z) const {
  CVector out(dim_);
  const double m = level_;
  if (model_.is_sphere()) {
    // h^{m/2} z^{j-1} (j - m u), u = |z|^2 / (1 + |z|^2).
    const double r = std::abs(z);
    const double t = r * r;
    const double u = t / (1.0 + t);
    const double half_log_s = 0.5 * m * std::log1p(t);
    if (r == 0.0) {
      out.setZero();
      if (dim_ > 1) out(1) = 1.0;
      return out;
    }
    const double log_r = std::log(r);
    const double phi = std::arg(z);
    out(0) = -m * std::conj(z) * std::exp(-std::log1p(t) - half_log_s);
    for (int j = 1; j < dim_; ++j) {
      out(j) = std::polar(std::exp((j - 1) * log_r - half_log_s), (j - 1) * phi) * (j - m * u);
    }
    return out;
  }
  // Each theta term picks up 2 pi i m (a + y): d of the exponent plus m d log h.
  const Complex tau = model_.tau();
  const auto [x, y] = model_.lattice_coords(model_.reduce({z}).z);
  const int n0 = -static_cast<int>(std::lround(y));
  for (int j = 0; j < dim_; ++j) {
    Complex acc{};
    for (int n = n0 - cutoff_; n <= n0 + cutoff_; ++n) {
      const double a = n + static_cast<double>(j) / m;
      const double s = a + y;
      const double modulus = std::exp(-kPi * m * tau.imag() * s * s);
      const double phase = kPi * m * tau.real() * a * a + 2.0 * kPi * m * a * (x + tau.real() * y);
      acc += std::polar(modulus, phase) * (2.0 * kPi * kI * m * s);
    }
    out(j) = acc;
  }
  return out;
}

double sphere_gram_entry(int m, int j) {
  return 2.0 * kPi * std::exp(std::lgamma(j + 1.0) + std::lgamma(m - j + 1.0) - std::lgamma(m + 2.0));
}

namespace {

CMatrix raw_rows(const SectionBasis& basis, const std::vector<ChartPoint>& nodes) {
  CMatrix w(static_cast<Eigen::Index>(nodes.size()), basis.dim());
  for (size_t n = 0; n < nodes.size(); ++n) w.row(static_cast<Eigen::Index>(n)) = basis.weighted_values(nodes[n].z).transpose();
  return w;
}

RVector weight_vector(const QuadratureRule& rule) {
  RVector w(static_cast<Eigen::Index>(rule.size()));
  for (size_t n = 0; n < rule.size(); ++n) w(static_cast<Eigen::Index>(n)) = rule.weights[n];
  return w;
}

// Cholesky of D^{-1/2} G D^{-1/2}; returns the upper factor of G itself.
CMatrix scaled_cholesky_upper(const CMatrix& gram) {
  const Eigen::Index n = gram.rows();
  if (gram.cols() != n) throw Error(ErrorCode::DimensionMismatch, "Gram matrix not square");
  RVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double g = gram(i, i).real();
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw Error(ErrorCode::NotPositiveDefinite, "non-positive Gram diagonal at " + std::to_string(i));
    }
    d(i) = std::sqrt(g);
  }
  const CMatrix scaled = d.cwiseInverse().asDiagonal() * gram * d.cwiseInverse().asDiagonal();
  Eigen::LLT<CMatrix> llt(scaled);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization failed");
  CMatrix lower = llt.matrixL();
  const double min_pivot = lower.diagonal().real().minCoeff();
  if (!(min_pivot > 1e-7)) {
    throw Error(ErrorCode::NotPositiveDefinite, "Gram matrix is numerically singular");
  }
  return lower.adjoint() * d.asDiagonal();
}

}  // namespace

CMatrix gram_matrix(const SectionBasis& basis, const QuadratureRule& rule, GramMode mode) {
  const int dim = basis.dim();
  if (mode == GramMode::ClosedForm) {
    if (!basis.model().is_sphere()) {
      throw Error(ErrorCode::OracleMissing, "closed-form Gram exists on the sphere only");
    }
    CMatrix g = CMatrix::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) g(j, j) = sphere_gram_entry(basis.level(), j);
    return g;
  }
  if (rule.kind != basis.model().kind()) throw Error(ErrorCode::DimensionMismatch, "rule and basis on different models");
  const CMatrix w = raw_rows(basis, rule.nodes);
  CMatrix g = w.adjoint() * weight_vector(rule).asDiagonal() * w;
  g = 0.5 * (g + g.adjoint()).eval();
  if (basis.model().is_sphere()) {
    double worst = 0.0, scale = 0.0;
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        const double exact = j == k ? sphere_gram_entry(basis.level(), j) : 0.0;
        worst = std::max(worst, std::abs(g(j, k) - exact));
        scale = std::max(scale, exact);
      }
    }
    if (worst > rule.tolerance * std::max(1.0, scale)) {
      throw Error(ErrorCode::UnderResolved, "quadrature Gram disagrees with the closed form");
    }
  }
  scaled_cholesky_upper(g);
  return g;
}

OrthonormalFrame orthonormalize(const SectionBasis& basis, const CMatrix& gram) {
  if (gram.rows() != basis.dim()) throw Error(ErrorCode::DimensionMismatch, "Gram size differs from basis dimension");
  CMatrix upper = scaled_cholesky_upper(gram);
  CMatrix transform = upper.triangularView<Eigen::Upper>().solve(CMatrix::Identity(basis.dim(), basis.dim()));
  return OrthonormalFrame{basis, gram, std::move(upper), std::move(transform)};
}

CVector OrthonormalFrame::orthonormal_values(Complex z) const {
  // psi = C^T w, i.e. R^T psi = w.
  return upper.transpose().triangularView<Eigen::Lower>().solve(basis.weighted_values(z));
}

CVector OrthonormalFrame::orthonormal_connection_values(Complex z) const {
  return upper.transpose().triangularView<Eigen::Lower>().solve(basis.weighted_connection_values(z));
}

CMatrix OrthonormalFrame::to_orthonormal(const CMatrix& raw) const {
  return upper.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(raw);
}

NodeTable make_node_table(const OrthonormalFrame& frame, const QuadratureRule& rule) {
  if (rule.kind != frame.model().kind()) throw Error(ErrorCode::DimensionMismatch, "rule and frame on different models");
  NodeTable table;
  table.nodes = rule.nodes;
  table.weights = weight_vector(rule);
  table.values = frame.to_orthonormal(raw_rows(frame.basis, rule.nodes));
  return table;
}

Complex inner_product(const NodeTable& table, const CVector& a, const CVector& b) {
  if (a.size() != table.values.cols() || b.size() != table.values.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector length differs from frame dimension");
  }
  const CVector sa = table.values * a;
  const CVector sb = table.values * b;
  Complex acc{};
  for (Eigen::Index n = 0; n < sa.size(); ++n) acc += table.weights(n) * std::conj(sa(n)) * sb(n);
  return acc;
}

Complex inner_product(const OrthonormalFrame& frame, const QuadratureRule& rule, const CVector& a,
                      const CVector& b) {
  if (a.size() != frame.dim() || b.size() != frame.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector length differs from frame dimension");
  }
  return inner_product(make_node_table(frame, rule), a, b);
}

int default_resolution(const KahlerModel& model, int m) {
  return model.is_sphere() ? 2 * m + 16 : std::max(32, 4 * m + 16);
}

Level make_level(const KahlerModel& model, int m, int resolution, GramMode mode) {
  SectionBasis basis = build_basis(model, m);
  const int res = resolution > 0 ? resolution : default_resolution(model, m);
  QuadratureRule rule = build_quadrature(model, res);
  CMatrix g = gram_matrix(basis, rule, mode);
  OrthonormalFrame frame = orthonormalize(basis, g);
  NodeTable table = make_node_table(frame, rule);
  return Level{model, m, std::move(rule), std::move(frame), std::move(table)};
}

}  // namespace btq
