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

#include "btq/semiclassic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include <Eigen/SVD>

#include "btq/calculus.hpp"
#include "btq/coherent.hpp"
#include "btq/error.hpp"
#include "btq/operators.hpp"

namespace btq {

namespace {

// Residual sequences whose largest entry is below this count as identically zero.
constexpr double kVanishing = 1e-12;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string indexed(const std::string& name, size_t k) { return name + "[" + std::to_string(k) + "]"; }

double unit_uniform(std::mt19937_64& rng) {
  // Open interval (0, 1), independent of the standard library's distributions.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

LevelSweep make_sweep(const KahlerModel& model, const std::vector<int>& levels, std::string quantity,
                      std::vector<Complex> values) {
  LevelSweep s{model.name(), levels, std::move(quantity), std::move(values)};
  s.validate();
  return s;
}

std::vector<Complex> as_complex(const std::vector<double>& v) { return {v.begin(), v.end()}; }

// Log-log slope over the levels whose value is above the round-off floor,
// plus the local slope between the two largest levels (informational).
// A sequence that vanishes identically passes.
void add_slope_rows(CheckReport& rep, const std::string& name, const std::vector<int>& levels,
                    const std::vector<double>& values, double slope_max) {
  const double peak = *std::max_element(values.begin(), values.end());
  std::vector<int> kept_levels;
  std::vector<double> kept;
  for (size_t i = 0; i < levels.size(); ++i) {
    if (values[i] > kVanishing * std::max(1.0, peak)) {
      kept_levels.push_back(levels[i]);
      kept.push_back(values[i]);
    }
  }
  if (kept.size() < 2) {
    rep.entries.push_back({0, name, 0.0, slope_max, peak <= kVanishing});
    return;
  }
  const double s = loglog_slope(kept_levels, kept);
  rep.entries.push_back({0, name, s, slope_max, s <= slope_max});
  const size_t n = kept.size();
  const double tail = std::log(kept[n - 1] / kept[n - 2]) /
                      std::log(static_cast<double>(kept_levels[n - 1]) / kept_levels[n - 2]);
  rep.entries.push_back({0, "tail_" + name, tail, slope_max, true});
}

// Rows shared by the Dirac and product checks: residual per level bounded by
// K/m, the measured K, the log-log slope and the monotonicity gate for m >= 8.
void add_rate_rows(CheckReport& rep, const std::vector<int>& levels, const std::vector<double>& r,
                   double slope_max) {
  double k_const = 0.0;
  for (size_t i = 0; i < levels.size(); ++i) k_const = std::max(k_const, levels[i] * r[i]);
  for (size_t i = 0; i < levels.size(); ++i) {
    const double bound = k_const / levels[i];
    rep.entries.push_back({levels[i], "residual", r[i], bound, r[i] <= bound * (1.0 + 1e-12) + 1e-15});
  }
  rep.entries.push_back({0, "K", k_const, 0.0, std::isfinite(k_const)});

  add_slope_rows(rep, "slope", levels, r, slope_max);

  bool monotone = true;
  for (size_t i = 1; i < levels.size(); ++i) {
    if (levels[i - 1] < 8) continue;
    if (r[i] > r[i - 1] * (1.0 + 1e-9) + kVanishing) monotone = false;
  }
  rep.entries.push_back({0, "monotone", monotone ? 1.0 : 0.0, 0.0, monotone});
}

std::string joined_labels(const std::vector<Observable>& fs, const char* sep) {
  std::string out;
  for (size_t i = 0; i < fs.size(); ++i) {
    if (i) out += sep;
    out += fs[i].label();
  }
  return out;
}

std::optional<AsymptoticFit> fit_if_possible(const LevelSweep& sweep, int order) {
  if (order < 1 || sweep.levels.size() < static_cast<size_t>(order) + 2) return std::nullopt;
  return fit_inverse_powers(sweep, order);
}

}  // namespace

bool CheckReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const ReportEntry& e) { return e.pass; });
}

const ReportEntry& CheckReport::entry(std::string_view quantity, int level) const {
  for (const auto& e : entries) {
    if (e.quantity == quantity && e.level == level) return e;
  }
  throw std::out_of_range("no entry " + std::string(quantity) + " at level " + std::to_string(level));
}

std::vector<int> default_levels(const KahlerModel& model) {
  if (model.is_sphere()) return {4, 6, 8, 12, 16, 24, 32, 48, 64};
  return {2, 3, 4, 6, 8, 12, 16, 24};
}

std::vector<ChartPoint> sample_probes(const KahlerModel& model, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ChartPoint> out;
  out.reserve(static_cast<size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double a = unit_uniform(rng);
    const double b = unit_uniform(rng);
    if (model.is_sphere()) {
      out.push_back({chart_from_params(model, a, 2.0 * kPi * b)});
    } else {
      out.push_back({model.from_lattice(a, b)});
    }
  }
  return out;
}

CheckReport check_norm_limit(LevelStore& store, const Observable& f, const std::vector<int>& levels,
                             int fit_order) {
  const KahlerModel& model = store.model();
  std::vector<double> gaps;
  for (int m : levels) {
    const Level& lv = store.get(m);
    const double norm = operator_norm(toeplitz(lv, f));
    const double sup = sup_abs(model, lv.rule, [&](Complex z) { return f(z); });
    gaps.push_back(sup - norm);
  }
  CheckReport rep{"norm", f.label(), make_sweep(model, levels, "gap", as_complex(gaps)), std::nullopt, {}};

  double c_const = 0.0;
  const size_t half = std::max<size_t>(1, (levels.size() + 1) / 2);
  for (size_t i = 0; i < half && i < levels.size(); ++i) c_const = std::max(c_const, levels[i] * gaps[i]);
  c_const *= 2.0;
  for (size_t i = 0; i < levels.size(); ++i) {
    const double bound = c_const / levels[i];
    rep.entries.push_back({levels[i], "gap", gaps[i], bound, gaps[i] >= -1e-10 && gaps[i] <= bound + 1e-10});
  }
  rep.entries.push_back({0, "C", c_const, 0.0, true});

  rep.fit = fit_if_possible(rep.sweep, fit_order);
  if (rep.fit) {
    const int order = leading_order(*rep.fit);
    rep.entries.push_back({0, "decay_order", static_cast<double>(order), 1.0, order >= 1});
  }
  return rep;
}

CheckReport check_norm_chain(LevelStore& store, const Observable& f, const std::vector<int>& levels) {
  const KahlerModel& model = store.model();
  CheckReport rep{"norm_chain", f.label(), {}, std::nullopt, {}};
  std::vector<Complex> norms;
  for (int m : levels) {
    const Level& lv = store.get(m);
    const OperatorMatrix t = toeplitz(lv, f);
    const double norm = operator_norm(t);
    const double berezin_sup = symbol_on_nodes(lv, t).cwiseAbs().maxCoeff();
    const double sup = sup_abs(model, lv.rule, [&](Complex z) { return f(z); });
    rep.entries.push_back({m, "berezin_sup", berezin_sup, norm, berezin_sup <= norm * (1.0 + 1e-12) + 1e-12});
    rep.entries.push_back({m, "norm", norm, sup + 1e-10, norm <= sup + 1e-10});
    norms.push_back(norm);
  }
  rep.sweep = make_sweep(model, levels, "norm", std::move(norms));
  return rep;
}

CheckReport check_dirac(LevelStore& store, const Observable& f, const Observable& g,
                        const std::vector<int>& levels, double slope_max) {
  const KahlerModel& model = store.model();
  const Observable bracket = poisson_bracket(model, f, g);
  std::vector<double> r;
  for (int m : levels) {
    const Level& lv = store.get(m);
    const OperatorMatrix comm = commutator(toeplitz(lv, f), toeplitz(lv, g));
    const OperatorMatrix lhs = Complex(0.0, static_cast<double>(m)) * comm;
    r.push_back(operator_norm(lhs - toeplitz(lv, bracket)));
  }
  CheckReport rep{"dirac", f.label() + ";" + g.label(), make_sweep(model, levels, "residual", as_complex(r)),
                  std::nullopt, {}};
  add_rate_rows(rep, levels, r, slope_max);
  return rep;
}

CheckReport check_product(LevelStore& store, const std::vector<Observable>& factors,
                          const std::vector<int>& levels, double slope_max) {
  if (factors.size() < 2) throw Error(ErrorCode::DimensionMismatch, "product check needs at least two factors");
  const KahlerModel& model = store.model();
  Observable prod = factors.front();
  for (size_t i = 1; i < factors.size(); ++i) prod = prod * factors[i];
  std::vector<double> r;
  for (int m : levels) {
    const Level& lv = store.get(m);
    OperatorMatrix lhs = toeplitz(lv, factors.front());
    for (size_t i = 1; i < factors.size(); ++i) lhs = lhs * toeplitz(lv, factors[i]);
    r.push_back(operator_norm(lhs - toeplitz(lv, prod)));
  }
  CheckReport rep{"product", joined_labels(factors, ";"), make_sweep(model, levels, "residual", as_complex(r)),
                  std::nullopt, {}};
  add_rate_rows(rep, levels, r, slope_max);
  return rep;
}

C1Report extract_c1(LevelStore& store, const Observable& f, const Observable& g,
                    const std::vector<int>& levels, const std::vector<ChartPoint>& probes, int fit_order,
                    double antisym_tol, double sass_slope_max) {
  const KahlerModel& model = store.model();
  const Observable bracket = poisson_bracket(model, f, g);
  const Observable fg = f * g;
  const size_t np = probes.size();
  const size_t nl = levels.size();

  // Per probe and level: s_m(f,g), s_m(g,f) and sigma(m i [T_f, T_g]).
  std::vector<std::vector<Complex>> s_fg(np, std::vector<Complex>(nl));
  std::vector<std::vector<Complex>> s_gf = s_fg, s_dirac = s_fg;
  for (size_t li = 0; li < nl; ++li) {
    const int m = levels[li];
    const Level& lv = store.get(m);
    const OperatorMatrix tf = toeplitz(lv, f), tg = toeplitz(lv, g), tfg = toeplitz(lv, fg);
    const double md = static_cast<double>(m);
    const OperatorMatrix a = md * Complex(1.0, 0.0) * (tf * tg - tfg);
    const OperatorMatrix b = md * Complex(1.0, 0.0) * (tg * tf - tfg);
    const OperatorMatrix d = Complex(0.0, md) * commutator(tf, tg);
    for (size_t p = 0; p < np; ++p) {
      const CoherentVector e = coherent_vector(lv.frame, probes[p]);
      s_fg[p][li] = covariant_symbol(a, e);
      s_gf[p][li] = covariant_symbol(b, e);
      s_dirac[p][li] = covariant_symbol(d, e);
    }
  }

  C1Report out;
  CheckReport& rep = out.report;
  rep.check = "star_c1";
  rep.subject = f.label() + ";" + g.label();
  rep.sweep = make_sweep(model, levels, "s_m[0]", np ? s_fg[0] : std::vector<Complex>(nl, 0.0));

  std::vector<Complex> c1(np);
  bool have_fit = true;
  for (size_t p = 0; p < np; ++p) {
    const auto fit_fg = fit_if_possible(make_sweep(model, levels, "s_fg", s_fg[p]), fit_order);
    const auto fit_gf = fit_if_possible(make_sweep(model, levels, "s_gf", s_gf[p]), fit_order);
    const auto fit_dirac = fit_if_possible(make_sweep(model, levels, "dirac", s_dirac[p]), fit_order);
    std::vector<Complex> anti(nl);
    for (size_t li = 0; li < nl; ++li) anti[li] = s_fg[p][li] - s_gf[p][li];
    const auto fit_anti = fit_if_possible(make_sweep(model, levels, "antisym", anti), fit_order);
    if (!fit_fg || !fit_gf || !fit_dirac || !fit_anti) {
      have_fit = false;
      break;
    }
    if (p == 0) rep.fit = fit_fg;

    const Complex z = probes[p].z;
    C1Probe pr;
    pr.x = probes[p];
    pr.c1_fg = fit_fg->coefficients[0];
    pr.c1_gf = fit_gf->coefficients[0];
    pr.antisymmetric = fit_anti->coefficients[0];
    pr.expected = Complex(0.0, -1.0) * bracket(z);
    pr.dirac_limit = fit_dirac->coefficients[0];
    pr.fit_tolerance = 10.0 * fit_anti->std_errors[0] + 1e-9;
    c1[p] = pr.c1_fg;

    const double err = std::abs(pr.antisymmetric - pr.expected);
    rep.entries.push_back({0, indexed("c1", p), pr.c1_fg, fit_fg->std_errors[0], true});
    rep.entries.push_back({0, indexed("antisym", p), pr.antisymmetric, antisym_tol, err <= antisym_tol});
    rep.entries.push_back({0, indexed("antisym_fit", p), err, pr.fit_tolerance, err <= pr.fit_tolerance});
    // Consistency triangle: Dirac limit, antisymmetric part and bracket.
    const double tri_tol = 10.0 * (fit_dirac->std_errors[0] + fit_anti->std_errors[0]) + 1e-9;
    const double tri = std::max(std::abs(pr.dirac_limit - bracket(z)),
                                std::abs(Complex(0.0, 1.0) * pr.antisymmetric - pr.dirac_limit));
    rep.entries.push_back({0, indexed("triangle", p), tri, tri_tol, tri <= tri_tol});
    out.probes.push_back(pr);
  }

  // Cauchy behaviour: max over probes of |s_m - s_2m| shrinks along doublings.
  double prev = INFINITY;
  for (size_t li = 0; li < nl; ++li) {
    const auto it = std::find(levels.begin(), levels.end(), 2 * levels[li]);
    if (it == levels.end()) continue;
    const size_t lj = static_cast<size_t>(it - levels.begin());
    double delta = 0.0;
    for (size_t p = 0; p < np; ++p) delta = std::max(delta, std::abs(s_fg[p][li] - s_fg[p][lj]));
    rep.entries.push_back({levels[li], "cauchy", delta, std::isfinite(prev) ? prev : 0.0,
                           delta <= prev * (1.0 + 1e-9) + kVanishing});
    prev = delta;
  }

  // Two-term remainder of the expansion at symbol level.
  if (have_fit && np > 0) {
    std::vector<double> rho(nl, 0.0);
    for (size_t li = 0; li < nl; ++li) {
      for (size_t p = 0; p < np; ++p) rho[li] = std::max(rho[li], std::abs(s_fg[p][li] - c1[p]) / levels[li]);
      rep.entries.push_back({levels[li], "sass_residual", rho[li], 0.0, std::isfinite(rho[li])});
    }
    add_slope_rows(rep, "sass_slope", levels, rho, sass_slope_max);
  }
  return out;
}

CheckReport check_trace_expansion(LevelStore& store, const Observable& f, const std::vector<int>& levels,
                                  int fit_order, double tolerance) {
  const KahlerModel& model = store.model();
  const Observable one = constant_observable(1.0);
  std::vector<Complex> per_m_one, per_m_f;
  CheckReport rep{"trace", f.label(), {}, std::nullopt, {}};
  for (int m : levels) {
    const Level& lv = store.get(m);
    const Complex tr_one = trace(toeplitz(lv, one));
    const Complex tr_f = trace(toeplitz(lv, f));
    const double dim = lv.dim();
    rep.entries.push_back({m, "trace_one", tr_one, 1e-9 * dim, std::abs(tr_one - dim) <= 1e-9 * dim});
    rep.entries.push_back({m, "trace", tr_f, 0.0, true});
    per_m_one.push_back(tr_one / static_cast<double>(m));
    per_m_f.push_back(tr_f / static_cast<double>(m));
  }
  rep.sweep = make_sweep(model, levels, "trace_over_m", per_m_f);
  const LevelSweep one_sweep = make_sweep(model, levels, "trace_one_over_m", per_m_one);
  const AsymptoticFit fit_one = fit_inverse_powers(one_sweep, fit_order);
  rep.fit = fit_inverse_powers(rep.sweep, fit_order);

  // Calibrate the volume constant from f = 1, then compare tau_0.
  const Level& top = store.get(levels.back());
  const double vol_one = integrate(top.rule, [](Complex) { return Complex(1.0, 0.0); }).real();
  const double vol = vol_one / fit_one.coefficients[0].real();
  const Complex expected = integrate(top.rule, [&](Complex z) { return f(z); }) / vol;
  const Complex tau0 = rep.fit->coefficients[0];
  rep.entries.push_back({0, "volume", vol, 0.0, std::isfinite(vol) && vol > 0.0});
  rep.entries.push_back({0, "tau0", tau0, tolerance, std::abs(tau0 - expected) <= tolerance});
  if (rep.fit->order() > 1) rep.entries.push_back({0, "tau1", rep.fit->coefficients[1], 0.0, true});
  return rep;
}

CheckReport check_berezin_expansion(LevelStore& store, const Observable& f, const std::vector<int>& levels,
                                    const std::vector<ChartPoint>& probes, int fit_order) {
  const KahlerModel& model = store.model();
  const Observable lap = laplacian(model, f);
  const size_t np = probes.size();
  std::vector<std::vector<Complex>> vals(np, std::vector<Complex>(levels.size()));
  for (size_t li = 0; li < levels.size(); ++li) {
    const Level& lv = store.get(levels[li]);
    const OperatorMatrix t = toeplitz(lv, f);
    for (size_t p = 0; p < np; ++p) vals[p][li] = berezin_transform(lv, t, probes[p]);
  }
  CheckReport rep{"berezin", f.label(), make_sweep(model, levels, "berezin[0]",
                                                   np ? vals[0] : std::vector<Complex>(levels.size(), 0.0)),
                  std::nullopt, {}};
  for (size_t p = 0; p < np; ++p) {
    const AsymptoticFit fit = fit_inverse_powers(make_sweep(model, levels, "berezin", vals[p]), fit_order);
    if (p == 0) rep.fit = fit;
    const Complex z = probes[p].z;
    const Complex f0 = f(z), f1 = lap(z);
    rep.entries.push_back({0, indexed("a0", p), fit.coefficients[0], 10.0 * fit.std_errors[0] + 1e-9,
                           fit.coefficient_matches(0, f0)});
    if (fit.order() > 1) {
      rep.entries.push_back({0, indexed("a1", p), fit.coefficients[1], 10.0 * fit.std_errors[1] + 1e-9,
                             fit.coefficient_matches(1, f1)});
    }
  }
  return rep;
}

std::vector<Observable> harmonic_family(const KahlerModel& model, int degree) {
  std::vector<Observable> out;
  if (model.is_sphere()) {
    const Observable x[3] = {sphere_coordinate(model, 1), sphere_coordinate(model, 2), sphere_coordinate(model, 3)};
    for (int total = 0; total <= degree; ++total) {
      for (int a = total; a >= 0; --a) {
        for (int b = total - a; b >= 0; --b) {
          const int c = total - a - b;
          Observable mono = constant_observable(1.0);
          std::string label;
          const int powers[3] = {a, b, c};
          for (int axis = 0; axis < 3; ++axis) {
            for (int k = 0; k < powers[axis]; ++k) mono = mono * x[axis];
            if (powers[axis] > 0) {
              if (!label.empty()) label += "*";
              label += "x" + std::to_string(axis + 1);
              if (powers[axis] > 1) label += "^" + std::to_string(powers[axis]);
            }
          }
          out.push_back(mono.relabeled(label.empty() ? "1" : label));
        }
      }
    }
  } else {
    for (int k = -degree; k <= degree; ++k) {
      for (int l = -degree; l <= degree; ++l) out.push_back(fourier_mode(model, k, l));
    }
  }
  return out;
}

SurjectivityReport surjectivity_rank(LevelStore& store, int m, const std::vector<Observable>& family,
                                     std::uint64_t seed) {
  const Level& lv = store.get(m);
  const Eigen::Index d = lv.dim();
  const Eigen::Index nf = static_cast<Eigen::Index>(family.size());
  CMatrix stacked(d * d, nf);
  for (Eigen::Index k = 0; k < nf; ++k) {
    const CMatrix t = toeplitz(lv, family[static_cast<size_t>(k)]).entries;
    stacked.col(k) = Eigen::Map<const CVector>(t.data(), d * d);
  }
  SurjectivityReport rep;
  rep.level = m;
  rep.expected = static_cast<int>(d * d);
  Eigen::JacobiSVD<CMatrix> svd(stacked);
  const RVector sv = svd.singularValues();
  rep.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double top = sv.size() ? sv(0) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rep.rank += sv(i) > 1e-10 * top ? 1 : 0;
  if (rep.rank < rep.expected) throw RankDeficientError(rep.rank, rep.expected);

  // A random Hermitian target must be reproduced with real coefficients.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  CMatrix target(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    target(i, i) = gauss(rng);
    for (Eigen::Index j = i + 1; j < d; ++j) {
      target(i, j) = Complex(gauss(rng), gauss(rng));
      target(j, i) = std::conj(target(i, j));
    }
  }
  RMatrix real_design(2 * d * d, nf);
  real_design.topRows(d * d) = stacked.real();
  real_design.bottomRows(d * d) = stacked.imag();
  const CVector tv = Eigen::Map<const CVector>(target.data(), d * d);
  RVector rhs(2 * d * d);
  rhs.head(d * d) = tv.real();
  rhs.tail(d * d) = tv.imag();
  Eigen::JacobiSVD<RMatrix> rsvd(real_design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  rsvd.setThreshold(1e-10);
  const RVector coef = rsvd.solve(rhs);
  const CVector recon = stacked * coef.cast<Complex>();
  rep.hermitian_residual = (recon - tv).cwiseAbs().maxCoeff();
  return rep;
}

std::vector<double> tuynman_positive_candidates() { return {0.25, 0.5, 1.0, 2.0, 4.0}; }

std::vector<double> tuynman_signed_candidates() {
  return {-4.0, -2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0, 4.0};
}

TuynmanReport check_tuynman(LevelStore& store, const std::vector<Observable>& observables,
                            const std::vector<int>& levels, const std::vector<double>& candidates,
                            double tolerance) {
  if (candidates.empty()) throw Error(ErrorCode::DimensionMismatch, "no Tuynman candidates");
  TuynmanReport out;
  CheckReport& rep = out.report;
  rep.check = "tuynman";
  rep.subject = joined_labels(observables, ";");

  // residual[c][level] = max over observables.
  std::vector<std::vector<double>> table(candidates.size(), std::vector<double>(levels.size(), 0.0));
  for (size_t li = 0; li < levels.size(); ++li) {
    const Level& lv = store.get(levels[li]);
    for (const auto& f : observables) {
      for (size_t ci = 0; ci < candidates.size(); ++ci) {
        table[ci][li] = std::max(table[ci][li], tuynman_residual(lv, f, candidates[ci]));
      }
    }
  }
  size_t best = 0;
  double best_res = INFINITY;
  for (size_t ci = 0; ci < candidates.size(); ++ci) {
    const double worst = *std::max_element(table[ci].begin(), table[ci].end());
    out.scan.emplace_back(candidates[ci], worst);
    rep.entries.push_back({0, "scan[c=" + fmt(candidates[ci]) + "]", worst, tolerance, true});
    if (worst < best_res) {
      best_res = worst;
      best = ci;
    }
  }
  out.best_factor = candidates[best];
  out.best_residual = best_res;
  rep.sweep = make_sweep(store.model(), levels, "residual", as_complex(table[best]));
  for (size_t li = 0; li < levels.size(); ++li) {
    rep.entries.push_back({levels[li], "residual", table[best][li], tolerance, table[best][li] < tolerance});
  }
  rep.entries.push_back({0, "best_factor", out.best_factor, tolerance, best_res < tolerance});
  return out;
}

CheckReport check_epsilon(LevelStore& store, const std::vector<int>& levels,
                          const std::vector<ChartPoint>& probes, double tolerance, double integral_tolerance) {
  const KahlerModel& model = store.model();
  CheckReport rep{"epsilon", "epsilon", {}, std::nullopt, {}};
  std::vector<Complex> ref;
  const ChartPoint anchor = probes.empty() ? ChartPoint{model.from_lattice(0.25, 0.25)} : probes.front();
  for (int m : levels) {
    const Level& lv = store.get(m);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& x : probes) {
      const double e = epsilon(lv, x);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    if (!probes.empty()) {
      // The torus density is constant only up to exponentially small terms.
      const bool spread_ok = model.is_torus() || hi - lo <= tolerance * std::max(1.0, hi);
      rep.entries.push_back({m, "spread", hi - lo, tolerance, spread_ok});
      if (model.is_sphere()) {
        const double expected = (m + 1) / (2.0 * kPi);
        const double dev = std::max(std::abs(hi - expected), std::abs(lo - expected));
        rep.entries.push_back({m, "value", hi, tolerance, dev <= tolerance * std::max(1.0, expected)});
      }
    }
    const RVector eps = epsilon_on_nodes(lv);
    const double integral = lv.table.weights.dot(eps);
    rep.entries.push_back({m, "integral", integral, integral_tolerance,
                           std::abs(integral - lv.dim()) <= integral_tolerance * std::max(1.0, double(lv.dim()))});
    ref.push_back(bergman_diagonal(lv.frame, anchor) / static_cast<double>(m));
  }
  rep.sweep = make_sweep(model, levels, "u_over_m", ref);
  rep.fit = fit_if_possible(rep.sweep, std::min<int>(3, static_cast<int>(levels.size()) - 2));
  if (rep.fit) {
    const double expected = 1.0 / model.volume();
    const Complex a0 = rep.fit->coefficients[0];
    // On the torus u_m approaches m / vol exponentially fast, outside the
    // reach of an inverse-power fit; the integral rows carry the check there.
    rep.entries.push_back({0, "leading", a0, 1e-6, model.is_torus() || std::abs(a0 - expected) <= 1e-6});
  }
  return rep;
}

CheckReport check_pullback(LevelStore& store, const std::vector<int>& levels,
                           const std::vector<ChartPoint>& probes, double tolerance) {
  const KahlerModel& model = store.model();
  CheckReport rep{"pullback", "pullback", {}, std::nullopt, {}};
  std::vector<Complex> tracked;
  for (int m : levels) {
    const Level& lv = store.get(m);
    if (model.is_sphere()) {
      double worst = 0.0;
      for (const auto& x : probes) {
        const double p = pullback_fs_density(lv.frame, x);
        worst = std::max(worst, std::abs(p / (m * model.kahler_density(x.z)) - 1.0));
      }
      rep.entries.push_back({m, "relative_error", worst, tolerance, worst <= tolerance});
      tracked.push_back(worst);
    } else {
      // Integral of the correction against i dz ^ dzbar = 2 Im(tau) dx dy.
      constexpr int kGrid = 16;
      double sum = 0.0, peak = 0.0;
      for (int i = 0; i < kGrid; ++i) {
        for (int j = 0; j < kGrid; ++j) {
          const ChartPoint x{model.from_lattice((i + 0.5) / kGrid, (j + 0.5) / kGrid)};
          const double corr = pullback_fs_density(lv.frame, x) - m * model.kahler_density(x.z);
          sum += corr;
          peak = std::max(peak, std::abs(corr));
        }
      }
      const double integral = sum / (kGrid * kGrid) * 2.0 * model.tau().imag();
      rep.entries.push_back({m, "correction_mean", integral, tolerance, std::abs(integral) <= tolerance});
      rep.entries.push_back({m, "correction_max", peak, 0.0, true});
      tracked.push_back(integral);
    }
  }
  rep.sweep = make_sweep(model, levels, model.is_sphere() ? "relative_error" : "correction_mean", tracked);
  return rep;
}

CheckReport check_adjointness(LevelStore& store, const std::vector<std::vector<Observable>>& operators,
                              const std::vector<Observable>& tests, const std::vector<int>& levels,
                              double tolerance) {
  CheckReport rep{"adjointness", "", {}, std::nullopt, {}};
  std::vector<Complex> worst_per_level;
  for (int m : levels) {
    const Level& lv = store.get(m);
    double worst = 0.0;
    for (const auto& factors : operators) {
      if (factors.empty()) continue;
      OperatorMatrix a = toeplitz(lv, factors.front());
      for (size_t i = 1; i < factors.size(); ++i) a = a * toeplitz(lv, factors[i]);
      for (const auto& f : tests) {
        const double err = adjointness_check(lv, a, f);
        worst = std::max(worst, err);
        rep.entries.push_back({m, "T[" + joined_labels(factors, "]T[") + "]|" + f.label(), err, tolerance,
                               err < tolerance});
      }
    }
    worst_per_level.push_back(worst);
  }
  std::string subject;
  for (size_t i = 0; i < operators.size(); ++i) subject += (i ? ";" : "") + joined_labels(operators[i], "*");
  rep.subject = subject;
  rep.sweep = make_sweep(store.model(), levels, "max_error", worst_per_level);
  return rep;
}

CheckReport check_contravariant(LevelStore& store, const std::vector<Observable>& observables,
                                const std::vector<int>& levels, double tolerance) {
  CheckReport rep{"contravariant", joined_labels(observables, ";"), {}, std::nullopt, {}};
  std::vector<Complex> worst_per_level;
  for (int m : levels) {
    const Level& lv = store.get(m);
    double worst = 0.0;
    for (const auto& f : observables) {
      const double err = operator_norm(contravariant_reconstruct(lv, f) - toeplitz(lv, f));
      worst = std::max(worst, err);
      rep.entries.push_back({m, f.label(), err, tolerance, err < tolerance});
    }
    worst_per_level.push_back(worst);
  }
  rep.sweep = make_sweep(store.model(), levels, "max_error", worst_per_level);
  return rep;
}

}  // namespace btq
