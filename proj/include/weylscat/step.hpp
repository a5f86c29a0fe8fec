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

#include "kinematics.hpp"

namespace weylscat {

// Single-discontinuity amplitudes for a sharp potential step.
//
// Matching the two spinor components across the step compresses into one
// complex parameter
//
//   alpha = [q1 c (E + p3 c) + i p2 c V0] / [p1 c (E - V0 + p3 c)]
//
// plus the real basis-change factor
//
//   N^2 = E (E - V0 + p3 c) / [(E - V0)(E + p3 c)],
//
// which converts between the incident-side and barrier-side spinor
// normalizations. N^2 > 0 in both propagating zones: below the barrier the
// sign flips of (E - V0) and (E - V0 + p3 c) cancel.
//
// Three elementary problems build everything else:
//   step 1: wave from the left hits the up-step at x = 0
//   step 2: interior wave hits the down-step at x = L (phases referenced
//           to the x = 0 origin, hence the explicit exp factors)
//   step 3: interior left-mover hits the up-step at x = 0 from inside
//
// Re[alpha] > 0 above the barrier and < 0 below it; the step reflection
// probability (1 + |alpha|^2 - 2 Re alpha)/(1 + |alpha|^2 + 2 Re alpha)
// therefore exceeds 1 exactly in the Klein zone.
struct AlphaFactor {
  cplx alpha;
  double n;  // positive root of N^2
};

inline constexpr double singular_tol = 1e-12;

namespace detail {

// alpha's numerator and denominator without the division, valid in every
// regime (q1 may be imaginary). Used by the reflection probability, which
// stays finite even where alpha itself blows up (E = V0, grazing incidence).
struct AlphaParts {
  cplx num;     // q1 c (E + p3 c) + i p2 c V0
  double den;   // p1 c (E - V0 + p3 c)
};

inline AlphaParts alpha_parts(const Kinematics& k) {
  const double p1c = longitudinal_momentum(k) * k.c;
  const cplx q1c = barrier_momentum(k) * k.c;
  const double ep3 = k.E + k.p3 * k.c;
  return AlphaParts{q1c * ep3 + cplx(0.0, k.p2 * k.c * k.V0),
                    p1c * (k.E - k.V0 + k.p3 * k.c)};
}

}  // namespace detail

inline AlphaFactor alpha_factor(const Kinematics& k) {
  const Regime zone = classify_regime(k);
  if (zone == Regime::evanescent)
    throw regime_error("alpha_factor: evanescent zone, q1 imaginary");
  if (zone == Regime::boundary)
    throw regime_error("alpha_factor: boundary configuration");

  const double p1c = longitudinal_momentum(k) * k.c;
  const double scale = k.E + k.V0;
  if (p1c < singular_tol * scale)
    throw singularity_error("alpha_factor: grazing incidence, p1 ~ 0");
  const double em = k.E - k.V0;
  if (std::abs(em) < singular_tol * scale)
    throw singularity_error("alpha_factor: E ~ V0, N diverges");
  const double emp3 = em + k.p3 * k.c;
  if (std::abs(emp3) < singular_tol * scale)
    throw singularity_error("alpha_factor: E - V0 + p3 c ~ 0");
  const double ep3 = k.E + k.p3 * k.c;
  if (ep3 < singular_tol * scale)
    throw singularity_error("alpha_factor: E + p3 c ~ 0, spinor singular");

  const double q1c = barrier_momentum(k).real() * k.c;
  const cplx alpha = (q1c * ep3 + cplx(0.0, k.p2 * k.c * k.V0)) / (p1c * emp3);
  const double n2 = k.E * emp3 / (em * ep3);
  if (!(n2 > 0.0))
    throw singularity_error("alpha_factor: N^2 not positive");
  return AlphaFactor{alpha, std::sqrt(n2)};
}

enum class StepKind { step1_at0, step2_atL, step3_at0 };

struct StepResult {
  cplx r;
  cplx t;
  StepKind which;
};

namespace detail {

inline void check_resonant_denominator(const cplx& alpha) {
  if (std::abs(1.0 + alpha) < singular_tol * (1.0 + std::abs(alpha)))
    throw singularity_error("step: 1 + alpha ~ 0, resonant denominator");
}

}  // namespace detail

// Step 1: incident wave meets the up-step at x = 0.
// The AlphaFactor overloads exist so tests can inject a rescaled N and check
// which outputs are normalization independent.
inline StepResult step1(const AlphaFactor& af) {
  detail::check_resonant_denominator(af.alpha);
  return StepResult{(1.0 - af.alpha) / (1.0 + af.alpha),
                    2.0 / (af.n * (1.0 + af.alpha)), StepKind::step1_at0};
}

inline StepResult step1(const Kinematics& k) { return step1(alpha_factor(k)); }

// Step 2: interior right-mover meets the down-step at x = L.
inline StepResult step2(const Kinematics& k, double L, const AlphaFactor& af) {
  if (!(L >= 0.0)) throw domain_error("step2: L must be >= 0");
  detail::check_resonant_denominator(af.alpha);
  const double p1 = longitudinal_momentum(k);
  const double q1 = barrier_momentum(k).real();
  const cplx ac = std::conj(af.alpha);
  const cplx r = (af.alpha - 1.0) / (1.0 + ac) *
                 std::exp(cplx(0.0, 2.0 * q1 * L / k.hbar));
  const cplx t = 2.0 * af.n * af.alpha.real() / (1.0 + ac) *
                 std::exp(cplx(0.0, (q1 - p1) * L / k.hbar));
  return StepResult{r, t, StepKind::step2_atL};
}

inline StepResult step2(const Kinematics& k, double L) {
  return step2(k, L, alpha_factor(k));
}

// Step 3: interior left-mover meets the up-step at x = 0 from inside.
inline StepResult step3(const AlphaFactor& af) {
  detail::check_resonant_denominator(af.alpha);
  const cplx ac = std::conj(af.alpha);
  return StepResult{(ac - 1.0) / (1.0 + af.alpha),
                    2.0 * af.n * af.alpha.real() / (1.0 + af.alpha),
                    StepKind::step3_at0};
}

inline StepResult step3(const Kinematics& k) { return step3(alpha_factor(k)); }

// |r0|^2 for the single step, defined in every regime. Written in the
// division-free form
//
//   (|num|^2 + den^2 - 2 den Re[num]) / (|num|^2 + den^2 + 2 den Re[num])
//
// with num/den the alpha numerator/denominator, so the evanescent zone
// (Re[num] = 0) gives exactly 1 even where alpha itself is singular (E = V0).
inline double step_reflection_probability(const Kinematics& k) {
  const auto parts = detail::alpha_parts(k);
  const double n2 = std::norm(parts.num);
  const double d2 = parts.den * parts.den;
  const double cross = 2.0 * parts.den * parts.num.real();
  const double denom = n2 + d2 + cross;
  if (denom <= 0.0)
    throw singularity_error("step_reflection_probability: degenerate configuration");
  return (n2 + d2 - cross) / denom;
}

}  // namespace weylscat
