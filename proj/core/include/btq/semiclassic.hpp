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

#ifndef BTQ_SEMICLASSIC_HPP
#define BTQ_SEMICLASSIC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "btq/asymptotics.hpp"
#include "btq/level_store.hpp"
#include "btq/observable.hpp"

namespace btq {

/// One measured quantity. Level 0 marks sweep-wide quantities (slopes,
/// fitted constants); `error` is the tolerance or bound it was held to.
struct ReportEntry {
  int level = 0;
  std::string quantity;
  Complex value;
  double error = 0.0;
  bool pass = true;
};

struct CheckReport {
  std::string check;
  std::string subject;
  LevelSweep sweep;
  std::optional<AsymptoticFit> fit;
  std::vector<ReportEntry> entries;

  bool passed() const;
  /// Throws std::out_of_range when absent.
  const ReportEntry& entry(std::string_view quantity, int level = 0) const;
};

/// Sphere {4,6,8,12,16,24,32,48,64}; torus {2,3,4,6,8,12,16,24}.
std::vector<int> default_levels(const KahlerModel& model);

/// Seeded probe points: uniform in (u, phi) on the sphere, uniform in the
/// lattice coordinates on the torus.
std::vector<ChartPoint> sample_probes(const KahlerModel& model, int count, std::uint64_t seed);

/// d(m) = |f|_inf - ||T_f||, held to 0 <= d(m) <= C/m with
/// C = 2 max m d(m) over the first half of the levels, plus the leading
/// inverse power of the fitted d(m).
CheckReport check_norm_limit(LevelStore& store, const Observable& f, const std::vector<int>& levels,
                             int fit_order = 3);

/// |I^(m) f|_inf <= ||T_f|| <= |f|_inf + 1e-10 at every level.
CheckReport check_norm_chain(LevelStore& store, const Observable& f, const std::vector<int>& levels);

/// r(m) = || m i [T_f, T_g] - T_{f,g} ||; log-log slope <= slope_max.
CheckReport check_dirac(LevelStore& store, const Observable& f, const Observable& g,
                        const std::vector<int>& levels, double slope_max = -0.9);

/// r(m) = || T_f1 ... T_fr - T_{f1...fr} ||; log-log slope <= slope_max.
CheckReport check_product(LevelStore& store, const std::vector<Observable>& factors,
                          const std::vector<int>& levels, double slope_max = -0.9);

struct C1Probe {
  ChartPoint x;
  Complex c1_fg;
  Complex c1_gf;
  /// C1(f,g) - C1(g,f), expected to equal -i {f,g}.
  Complex antisymmetric;
  Complex expected;
  /// Fitted limit of sigma(m i [T_f, T_g]), expected to equal {f,g}.
  Complex dirac_limit;
  /// 10 x the propagated fit uncertainty of the antisymmetric part.
  double fit_tolerance;
};

struct C1Report {
  CheckReport report;
  std::vector<C1Probe> probes;
};

/// Fits s_m(x) = sigma(m (T_f T_g - T_fg))(x) at each probe; its limit is
/// the first star-product coefficient. Checks the antisymmetry law against
/// -i{f,g} (within max(antisym_tol, fit tolerance)), Cauchy behaviour of
/// s_m along m -> 2m, the decay of the two-term remainder
/// max_x |s_m(x) - C1(x)| / m (slope <= sass_slope_max) and the agreement of
/// the Dirac limit, the antisymmetric part and the Poisson bracket.
C1Report extract_c1(LevelStore& store, const Observable& f, const Observable& g,
                    const std::vector<int>& levels, const std::vector<ChartPoint>& probes,
                    int fit_order = 3, double antisym_tol = 1e-3, double sass_slope_max = -1.9);

/// Fits Tr T_f / m; tau_0 must equal (1/V) integral f Omega, with V
/// calibrated from the f = 1 sweep (Tr T_1 = dim).
CheckReport check_trace_expansion(LevelStore& store, const Observable& f, const std::vector<int>& levels,
                                  int fit_order = 3, double tolerance = 1e-5);

/// Fits I^(m)(f)(x) at each probe and compares a_0 with f(x) and a_1 with
/// Delta f(x), each within 10 propagated standard errors (+1e-9).
CheckReport check_berezin_expansion(LevelStore& store, const Observable& f, const std::vector<int>& levels,
                                    const std::vector<ChartPoint>& probes, int fit_order = 3);

struct SurjectivityReport {
  int level = 0;
  int rank = 0;
  int expected = 0;
  /// Max-entry error of a real-coefficient reconstruction of a random
  /// Hermitian matrix from the family.
  double hermitian_residual = 0.0;
  std::vector<double> singular_values;
};

/// Monomials x1^a x2^b x3^c with a + b + c <= degree; they span the
/// spherical harmonics up to that degree.
std::vector<Observable> harmonic_family(const KahlerModel& model, int degree);

/// Numerical rank (singular values > 1e-10 max) of the stacked T_f. Throws
/// RankDeficientError when below dim^2.
SurjectivityReport surjectivity_rank(LevelStore& store, int m, const std::vector<Observable>& family,
                                     std::uint64_t seed = 1);

/// The factors named for the Tuynman scan, and the same set with both signs.
std::vector<double> tuynman_positive_candidates();
std::vector<double> tuynman_signed_candidates();

struct TuynmanReport {
  CheckReport report;
  double best_factor = 0.0;
  /// max over observables and levels at best_factor.
  double best_residual = 0.0;
  /// (c, max residual) for every candidate.
  std::vector<std::pair<double, double>> scan;
};

TuynmanReport check_tuynman(LevelStore& store, const std::vector<Observable>& observables,
                            const std::vector<int>& levels, const std::vector<double>& candidates,
                            double tolerance = 1e-7);

/// Sphere: epsilon constant at the probes with value (m+1)/(2 pi) to
/// `tolerance`. Both models: integral of epsilon equals dim to
/// `integral_tolerance`. Sphere: leading coefficient of u_m/m equals 1/vol
/// to 1e-6 (reported only on the torus, where the approach is exponential).
CheckReport check_epsilon(LevelStore& store, const std::vector<int>& levels,
                          const std::vector<ChartPoint>& probes, double tolerance = 1e-10,
                          double integral_tolerance = 1e-8);

/// Sphere: |p / (m g) - 1| <= tolerance at the probes. Torus: the integral
/// of the correction p - m g against i dz ^ dzbar over the fundamental
/// domain vanishes to `tolerance`; the profile maximum is reported only.
CheckReport check_pullback(LevelStore& store, const std::vector<int>& levels,
                           const std::vector<ChartPoint>& probes, double tolerance = 1e-6);

/// |<A, T_f>_HS - <sigma(A), f>_eps| for A = product of T over each factor list.
CheckReport check_adjointness(LevelStore& store, const std::vector<std::vector<Observable>>& operators,
                              const std::vector<Observable>& tests, const std::vector<int>& levels,
                              double tolerance = 1e-7);

/// || integral f P_x eps Omega - T_f || for each observable.
CheckReport check_contravariant(LevelStore& store, const std::vector<Observable>& observables,
                                const std::vector<int>& levels, double tolerance = 1e-7);

}  // namespace btq

#endif  // BTQ_SEMICLASSIC_HPP
