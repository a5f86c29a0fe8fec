// Copyright (c) 2026 weylscat developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "detail/linear_solve.hpp"
#include "kinematics.hpp"
#include "step.hpp"

namespace weylscat {

// Rectangular barrier of height V0 on 0 < x < L.
//
// Total amplitudes are built three independent ways:
//
//  1. Multiple-reflection series: the incident wave enters (t0), rattles
//     between the walls (one round trip multiplies by loop = rL * r~0), and
//     leaks out on each pass,
//
//       t = t0 tL sum_s loop^s        r = r0 + t0 rL t~0 sum_s loop^s.
//
//     |loop| equals the single-step reflection probability, so the series
//     converges above the barrier and diverges geometrically below it
//     (Klein zone) where that probability exceeds one.
//
//  2. Closed form: summing the geometric series formally gives
//
//       t = exp(-i p1 L / hbar) / [cos(q1 L/hbar)
//             - i ((1+|alpha|^2)/(2 Re alpha)) sin(q1 L/hbar)]
//
//     and the matching r below. In the Klein zone this expression is the sum
//     of a divergent series; it is refused by default there and computed only
//     under an explicit "formal" override.
//
//  3. Matrix route: the four continuity conditions at x = 0 and x = L,
//     solved directly as a linear system in (r, A, B, t). This never sums
//     anything and keeps |r| < 1 in every propagating zone. Its phase
//     convention coincides with the closed form exactly (checked to
//     double-precision roundoff in both zones).
struct BarrierConfig {
  Kinematics kin;
  double L = 1.0;  // barrier width, > 0
};

inline void validate(const BarrierConfig& cfg) {
  validate(cfg.kin);
  if (!(cfg.L > 0.0) || !std::isfinite(cfg.L))
    throw domain_error("barrier: L must be > 0 and finite");
}

// Round-trip factor rL * r~0. Its magnitude is the step reflection
// probability; its phase advances by 2 q1 L / hbar per trip.
inline cplx loop_factor(const BarrierConfig& cfg) {
  validate(cfg);
  const AlphaFactor af = alpha_factor(cfg.kin);
  return step2(cfg.kin, cfg.L, af).r * step3(af).r;
}

struct SeriesExpansion {
  cplx loop;
  std::vector<cplx> terms_t;         // t0 tL loop^s, s = 0..
  std::vector<cplx> terms_r;         // r0, then t0 rL t~0 loop^s
  std::vector<cplx> partial_sums_t;  // prefix sums of terms_t
  std::vector<cplx> partial_sums_r;  // prefix sums of terms_r
  bool convergent = false;
  std::size_t truncation_index = 0;  // number of loop passes emitted

  // Summed amplitudes; only meaningful when the series converged.
  cplx summed_t() const {
    if (!convergent)
      throw series_divergence_error("series: |loop| >= 1, no sum exists");
    return partial_sums_t.back();
  }
  cplx summed_r() const {
    if (!convergent)
      throw series_divergence_error("series: |loop| >= 1, no sum exists");
    return partial_sums_r.back();
  }
};

// Emit the multiple-reflection series term by term. Above the barrier the
// expansion stops once |term| < tol * |partial sum| (geometric tail bound);
// below it the loop gain exceeds one, so exactly max_terms terms are emitted
// and the result is marked non-convergent. Term magnitudes are also capped at
// 1e280 to avoid silently overflowing to inf in deep Klein scans.
inline SeriesExpansion series_expand(const BarrierConfig& cfg,
                                     std::size_t max_terms = 10000,
                                     double tol = 1e-12) {
  validate(cfg);
  if (max_terms < 1) throw domain_error("series: max_terms must be >= 1");
  if (!(tol > 0.0)) throw domain_error("series: tol must be > 0");

  const AlphaFactor af = alpha_factor(cfg.kin);
  const StepResult s1 = step1(af);
  const StepResult s2 = step2(cfg.kin, cfg.L, af);
  const StepResult s3 = step3(af);

  SeriesExpansion out;
  out.loop = s2.r * s3.r;
  out.convergent = std::abs(out.loop) < 1.0;

  const cplx t_base = s1.t * s2.t;       // leaks out to the right each pass
  const cplx r_base = s1.t * s2.r * s3.t;  // leaks back out to the left

  out.terms_r.push_back(s1.r);  // prompt reflection off the front wall
  out.partial_sums_r.push_back(s1.r);

  const double lmag = std::abs(out.loop);
  cplx gain = 1.0;
  for (std::size_t s = 0; s < max_terms; ++s) {
    const cplx term_t = t_base * gain;
    const cplx term_r = r_base * gain;
    out.terms_t.push_back(term_t);
    out.partial_sums_t.push_back((s == 0 ? cplx(0.0) : out.partial_sums_t.back()) + term_t);
    out.terms_r.push_back(term_r);
    out.partial_sums_r.push_back(out.partial_sums_r.back() + term_r);
    out.truncation_index = s + 1;
    // Stop once the next term can no longer move either sum.
    if (out.convergent &&
        std::abs(term_t) * lmag <= tol * std::abs(out.partial_sums_t.back()) &&
        std::abs(term_r) * lmag <= tol * std::abs(out.partial_sums_r.back()))
      break;
    if (std::abs(gain) > 1e280) break;  // divergent scan guard
    gain *= out.loop;
  }
  return out;
}

enum class Method { closed_form, series_sum, matrix_solve };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed";
    case Method::series_sum: return "series";
    case Method::matrix_solve: return "matrix";
  }
  return "unknown";
}

// Whether the closed form may be evaluated below the barrier, where it is the
// formal sum of a divergent series.
enum class KleinPolicy { forbid, formal };

struct BarrierResult {
  cplx t;
  cplx r;
  Method method = Method::closed_form;
  bool formal = false;    // closed form evaluated in the Klein zone
  double condition = 0.0; // continuity-matrix condition estimate (matrix route)
};

inline BarrierResult closed_form(const BarrierConfig& cfg,
                                 KleinPolicy policy = KleinPolicy::forbid) {
  validate(cfg);
  const Regime zone = classify_regime(cfg.kin);
  if (zone == Regime::klein && policy != KleinPolicy::formal)
    throw regime_error(
        "closed_form: Klein zone requested; the expression there is the sum "
        "of a divergent series, pass the formal override to evaluate anyway");
  const AlphaFactor af = alpha_factor(cfg.kin);  // rejects evanescent/boundary

  const double p1 = longitudinal_momentum(cfg.kin);
  const double q1 = barrier_momentum(cfg.kin).real();
  const double theta = q1 * cfg.L / cfg.kin.hbar;
  const double re = af.alpha.real();
  const double m = (1.0 + std::norm(af.alpha)) / (2.0 * re);
  const cplx denom = std::cos(theta) - cplx(0.0, m) * std::sin(theta);

  BarrierResult out;
  out.method = Method::closed_form;
  out.formal = (zone == Regime::klein);
  out.t = std::exp(cplx(0.0, -p1 * cfg.L / cfg.kin.hbar)) / denom;
  out.r = cplx(0.0, -1.0) * (1.0 - af.alpha) * (1.0 + std::conj(af.alpha)) /
          (2.0 * re) * std::sin(theta) / denom;
  return out;
}

// Full interior solution of the continuity conditions: region coefficients
// for  u(p) e^{ipx} + r u(-p) e^{-ipx} | A u(q) e^{iqx} + B u(-q) e^{-iqx}
// | t u(p) e^{ipx}, all spinors unit-normalized.
struct InteriorSolution {
  cplx r, A, B, t;
  double condition = 0.0;
};

inline InteriorSolution continuity_solution(const BarrierConfig& cfg) {
  validate(cfg);
  const Regime zone = classify_regime(cfg.kin);
  if (zone == Regime::evanescent)
    throw regime_error("matrix solve: evanescent zone not handled");
  if (zone == Regime::boundary)
    throw regime_error("matrix solve: boundary configuration");

  const Kinematics& k = cfg.kin;
  const double p1 = longitudinal_momentum(k);
  const double q1 = barrier_momentum(k).real();
  const double em = k.E - k.V0;
  const Spinor up = spinor(p1, k.p2, k.p3, k.E, k.c);
  const Spinor um = spinor(-p1, k.p2, k.p3, k.E, k.c);
  const Spinor vp = spinor(q1, k.p2, k.p3, em, k.c);
  const Spinor vm = spinor(-q1, k.p2, k.p3, em, k.c);
  const cplx eq = std::exp(cplx(0.0, q1 * cfg.L / k.hbar));
  const cplx ep = std::exp(cplx(0.0, p1 * cfg.L / k.hbar));

  // Unknowns x = (r, A, B, t); rows are the two spinor components at x = 0
  // followed by the two at x = L.
  detail::Mat<4> M{};
  detail::Vec<4> rhs{};
  const cplx u0[2] = {up.up, up.down};
  const cplx m0[2] = {um.up, um.down};
  const cplx q0[2] = {vp.up, vp.down};
  const cplx qm[2] = {vm.up, vm.down};
  for (int i = 0; i < 2; ++i) {
    M[i][0] = m0[i];
    M[i][1] = -q0[i];
    M[i][2] = -qm[i];
    M[i][3] = 0.0;
    rhs[i] = -u0[i];
    M[2 + i][0] = 0.0;
    M[2 + i][1] = q0[i] * eq;
    M[2 + i][2] = qm[i] / eq;
    M[2 + i][3] = -u0[i] * ep;
    rhs[2 + i] = 0.0;
  }

  const double cond = detail::condition1(M);
  if (!(cond < 1e12))
    throw singularity_error("matrix solve: continuity system ill-conditioned");
  const auto x = detail::solve(M, rhs);
  return InteriorSolution{x[0], x[1], x[2], x[3], cond};
}

inline BarrierResult matrix_solve(const BarrierConfig& cfg) {
  const InteriorSolution sol = continuity_solution(cfg);
  BarrierResult out;
  out.method = Method::matrix_solve;
  out.t = sol.t;
  out.r = sol.r;
  out.condition = sol.condition;
  return out;
}

// Probabilities in the fully incoherent limit (barrier much wider than the
// packet): intensities of the multiple-reflection contributions add instead
// of amplitudes, giving the geometric sums
//
//   T_inc = (1 - |r0|^2) / (1 + |r0|^2)    R_inc = 2 |r0|^2 / (1 + |r0|^2).
struct IncoherentSplit {
  double transmission;
  double reflection;
};

inline IncoherentSplit incoherent_probabilities(const Kinematics& k) {
  if (classify_regime(k) != Regime::diffusion)
    throw regime_error(
        "incoherent_probabilities: defined only above the barrier "
        "(|r0| < 1 required for the geometric sum)");
  const double r2 = std::norm(step1(k).r);
  return IncoherentSplit{(1.0 - r2) / (1.0 + r2), 2.0 * r2 / (1.0 + r2)};
}

// Perfect-transmission energies q1(E) L / hbar = n pi inside [e_min, e_max].
struct Resonance {
  int n;
  double energy;
};

struct ResonanceScan {
  std::vector<Resonance> resonances;
  // p2 = p3 = 0: |t| = 1 at every energy above the barrier, independent of L.
  bool head_on_family = false;
};

// pattern supplies V0, p2, p3, c, hbar; its E field is ignored.
inline ResonanceScan find_resonances(const Kinematics& pattern, double L,
                                     double e_min, double e_max,
                                     double tol = 1e-10) {
  if (!(L > 0.0)) throw domain_error("find_resonances: L must be > 0");
  if (!(e_min < e_max)) throw domain_error("find_resonances: empty energy range");
  Kinematics k = pattern;
  k.E = e_min;
  if (classify_regime(k) != Regime::diffusion)
    throw regime_error("find_resonances: scan range must stay above the barrier");
  k.E = e_max;
  if (classify_regime(k) != Regime::diffusion)
    throw regime_error("find_resonances: scan range must stay above the barrier");

  const auto phase = [&](double E) {
    Kinematics kk = pattern;
    kk.E = E;
    return barrier_momentum(kk).real() * L / pattern.hbar;
  };

  ResonanceScan out;
  out.head_on_family = transverse_pc(pattern) < 1e-14 * e_min;

  // q1(E) increases monotonically with E above the barrier, so each multiple
  // of pi is bracketed once.
  const double pi = 3.14159265358979323846;
  const double lo = phase(e_min), hi = phase(e_max);
  for (int n = std::max(1, (int)std::ceil(lo / pi)); n * pi <= hi; ++n) {
    double a = e_min, b = e_max;
    const double target = n * pi;
    while (b - a > tol * std::max(1.0, std::abs(a))) {
      const double mid = 0.5 * (a + b);
      (phase(mid) < target ? a : b) = mid;
    }
    out.resonances.push_back(Resonance{n, 0.5 * (a + b)});
  }
  return out;
}

// Klein-zone divergence diagnosis. Each round trip multiplies the interior
// amplitude by the loop factor, |loop| > 1, read as stimulated pair creation:
// emitted flux grows geometrically while the partner holes stay confined
// between the walls. The proxy sequence is dimensionless bookkeeping
// (cumulative powers of |loop|), not a field-theoretic rate.
struct KleinReport {
  double loop_magnitude = 0.0;
  double bounce_period = 0.0;              // 2L / v_g, v_g = c^2 q1 / |E - V0|
  std::vector<double> per_bounce_growth;   // |t0 tL| |loop|^s, s = 0..bounces
  std::vector<double> hole_count_proxy;    // sum_{j<=s} |loop|^j
};

inline KleinReport klein_report(const BarrierConfig& cfg, std::size_t bounces) {
  validate(cfg);
  if (classify_regime(cfg.kin) != Regime::klein)
    throw regime_error("klein_report: defined only in the Klein zone");

  const AlphaFactor af = alpha_factor(cfg.kin);
  const StepResult s1 = step1(af);
  const StepResult s2 = step2(cfg.kin, cfg.L, af);
  const StepResult s3 = step3(af);
  const double loop_mag = std::abs(s2.r * s3.r);
  const double base = std::abs(s1.t * s2.t);

  KleinReport out;
  out.loop_magnitude = loop_mag;
  const double q1 = barrier_momentum(cfg.kin).real();
  const double vg = cfg.kin.c * cfg.kin.c * q1 / std::abs(cfg.kin.E - cfg.kin.V0);
  out.bounce_period = 2.0 * cfg.L / vg;

  double gain = 1.0, cum = 0.0;
  for (std::size_t s = 0; s <= bounces; ++s) {
    out.per_bounce_growth.push_back(base * gain);
    cum += gain;
    out.hole_count_proxy.push_back(cum);
    gain *= loop_mag;
  }
  return out;
}

}  // namespace weylscat
