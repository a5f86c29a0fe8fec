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
#include <string>

#include "errors.hpp"

namespace weylscat {

using cplx = std::complex<double>;

// One plane-wave configuration hitting a rectangular potential from the left.
// A massless positive-helicity particle with energy E and transverse momenta
// (p2, p3) propagates along +x; the potential region shifts the longitudinal
// momentum from p1 to q1:
//
//   p1 c = sqrt(E^2 - (p2 c)^2 - (p3 c)^2)
//   q1 c = sqrt((E - V0)^2 - (p2 c)^2 - (p3 c)^2)
//
// q1 is taken on the principal branch: real nonnegative when the radicand is
// positive (both above and below the barrier), i*|q1| when it is negative.
struct Kinematics {
  double E = 1.0;     // incoming energy, > 0
  double V0 = 0.0;    // potential height, >= 0
  double p2 = 0.0;    // transverse momentum along y
  double p3 = 0.0;    // transverse momentum along z
  double c = 1.0;     // propagation speed (light speed or Fermi velocity)
  double hbar = 1.0;  // action constant
};

// Energy zone of the configuration. The names follow the physical behaviour:
//   diffusion:  E > V0 + pt*c, ordinary over-barrier scattering, |r0| < 1
//   klein:      E < V0 - pt*c, negative-energy propagation inside, |r0| > 1
//   evanescent: (E-V0)^2 < (pt*c)^2, imaginary q1, total step reflection
//   boundary:   within eps_regime (relative to E) of a zone edge
enum class Regime { diffusion, klein, evanescent, boundary };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::diffusion: return "diffusion";
    case Regime::klein: return "klein";
    case Regime::evanescent: return "evanescent";
    case Regime::boundary: return "boundary";
  }
  return "unknown";
}

inline constexpr double default_regime_eps = 1e-9;

// Transverse momentum magnitude times c, in energy units.
inline double transverse_pc(const Kinematics& k) {
  return std::hypot(k.p2 * k.c, k.p3 * k.c);
}

inline void validate(const Kinematics& k) {
  if (!(k.E > 0.0)) throw domain_error("kinematics: E must be > 0");
  if (!(k.V0 >= 0.0)) throw domain_error("kinematics: V0 must be >= 0");
  if (!(k.c > 0.0)) throw domain_error("kinematics: c must be > 0");
  if (!(k.hbar > 0.0)) throw domain_error("kinematics: hbar must be > 0");
  if (!std::isfinite(k.E) || !std::isfinite(k.V0) || !std::isfinite(k.p2) ||
      !std::isfinite(k.p3) || !std::isfinite(k.c) || !std::isfinite(k.hbar))
    throw domain_error("kinematics: non-finite field");
  const double ptc = transverse_pc(k);
  if (k.E * k.E < ptc * ptc)
    throw domain_error("kinematics: E^2 < (p2 c)^2 + (p3 c)^2, no propagating incoming wave");
}

// Longitudinal momentum of the incoming wave, >= 0. Zero at grazing incidence.
inline double longitudinal_momentum(const Kinematics& k) {
  validate(k);
  const double ptc = transverse_pc(k);
  const double rad = (k.E - ptc) * (k.E + ptc);
  return std::sqrt(rad < 0.0 ? 0.0 : rad) / k.c;
}

// Longitudinal momentum inside the potential region. Real >= 0 when
// propagating (either zone), i*|q1| when evanescent.
inline cplx barrier_momentum(const Kinematics& k) {
  validate(k);
  const double ptc = transverse_pc(k);
  const double rad = (k.E - k.V0 - ptc) * (k.E - k.V0 + ptc);
  if (rad >= 0.0) return cplx(std::sqrt(rad) / k.c, 0.0);
  return cplx(0.0, std::sqrt(-rad) / k.c);
}

// Grazing incidence: the incoming wave carries no longitudinal momentum.
// Accepted here, singular for the amplitude formulas downstream.
inline bool is_grazing(const Kinematics& k, double eps = default_regime_eps) {
  return longitudinal_momentum(k) * k.c < eps * k.E;
}

inline Regime classify_regime(const Kinematics& k, double eps = default_regime_eps) {
  validate(k);
  const double ptc = transverse_pc(k);
  const double tol = eps * k.E;
  // Zone edges sit at E = V0 + pt c and E = V0 - pt c; grazing (p1 = 0) is
  // itself an edge of the valid domain.
  if (std::abs(k.E - (k.V0 + ptc)) < tol) return Regime::boundary;
  if (std::abs(k.E - (k.V0 - ptc)) < tol) return Regime::boundary;
  if (std::abs(k.E - ptc) < tol) return Regime::boundary;
  if (k.E > k.V0 + ptc) return Regime::diffusion;
  if (k.E < k.V0 - ptc) return Regime::klein;
  return Regime::evanescent;
}

// Two-component helicity spinor.
struct Spinor {
  cplx up;
  cplx down;
};

inline double norm2(const Spinor& s) { return std::norm(s.up) + std::norm(s.down); }

// Plane-wave spinor
//
//   u(p) = sqrt((E + p3 c)/(2E)) [1, (p1 c + i p2 c)/(E + p3 c)]^T
//
// for signed longitudinal momentum p1 and energy E (E may be negative for the
// interior branch below the barrier; the prefactor ratio stays positive on
// shell). Unit norm whenever E = +-|p| c.
inline Spinor spinor(double p1, double p2, double p3, double E, double c = 1.0) {
  const double denom = E + p3 * c;
  const double scale = std::abs(E) + std::abs(p3 * c) + std::abs(p1 * c) + std::abs(p2 * c);
  if (std::abs(denom) <= 1e-12 * scale)
    throw singularity_error("spinor: E + p3 c ~ 0, normalization singular");
  const double pref2 = denom / (2.0 * E);
  if (!(pref2 > 0.0))
    throw singularity_error("spinor: (E + p3 c)/(2E) not positive, off-shell branch");
  const double pref = std::sqrt(pref2);
  return Spinor{pref, pref * cplx(p1 * c, p2 * c) / denom};
}

}  // namespace weylscat
