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
#include <cstddef>
#include <vector>

#include "barrier.hpp"
#include "kinematics.hpp"

namespace weylscat {

// Graphene specialization: two-dimensional sheet (p3 = 0), Fermi velocity in
// place of the light speed, and angle variables
//
//   phi = arctan(p2 / p1)   (incidence)     theta = arctan(p2 / q1)
//
// with q1 on the nonnegative branch, so theta keeps the sign of p2 in both
// propagating zones. The transmission takes the angular form
//
//   |t|^2 = 1 / [cos^2(q1 L / hbar)
//           + ((s - sin phi sin theta)/(cos phi cos theta))^2 sin^2(q1 L/hbar)]
//
// where s = sign[E] sign[E - V0]. Two perfect-transmission families follow:
// the width resonances q1 L / hbar = n pi, and the head-on column phi = 0
// where |t| = 1 at every energy (no backscattering for massless chiral
// carriers). Below the barrier (s = -1) the formula is the analytic
// continuation of a divergent multiple-reflection sum; such values are
// reported tagged `formal`.
struct GrapheneConfig {
  double E = 1.0;    // carrier energy, > 0
  double V0 = 0.0;   // barrier height
  double phi = 0.0;  // incidence angle, |phi| < pi/2
  double L = 1.0;    // barrier width
  double v_F = 1.0;  // Fermi velocity
  double hbar = 1.0;
};

inline void validate(const GrapheneConfig& g) {
  if (!(g.E > 0.0)) throw domain_error("graphene: E must be > 0");
  if (!(g.V0 >= 0.0)) throw domain_error("graphene: V0 must be >= 0");
  if (!(std::abs(g.phi) < 1.5707963267948966))
    throw domain_error("graphene: |phi| must be < pi/2");
  if (!(g.L > 0.0)) throw domain_error("graphene: L must be > 0");
  if (!(g.v_F > 0.0) || !(g.hbar > 0.0))
    throw domain_error("graphene: v_F and hbar must be > 0");
}

// Equivalent three-dimensional configuration: p2 = (E / v_F) sin phi, p3 = 0.
inline Kinematics to_kinematics(const GrapheneConfig& g) {
  validate(g);
  return Kinematics{g.E, g.V0, g.E / g.v_F * std::sin(g.phi), 0.0, g.v_F, g.hbar};
}

inline double refraction_angle(const GrapheneConfig& g) {
  const Kinematics k = to_kinematics(g);
  const cplx q1 = barrier_momentum(k);
  if (q1.imag() != 0.0)
    throw regime_error("refraction_angle: evanescent zone, no propagation angle");
  if (!(q1.real() > 0.0))
    throw singularity_error("refraction_angle: q1 = 0, angle undefined");
  return std::atan(k.p2 / q1.real());
}

struct GrapheneTransmission {
  double t2 = 0.0;       // |t|^2
  double theta = 0.0;    // refraction angle
  Regime regime = Regime::diffusion;
  bool formal = false;   // Klein-zone evaluation
};

inline GrapheneTransmission transmission_graphene(const GrapheneConfig& g) {
  const Kinematics k = to_kinematics(g);
  const Regime zone = classify_regime(k);
  if (zone == Regime::evanescent)
    throw regime_error("transmission_graphene: evanescent zone (tunneling not modeled)");
  if (zone == Regime::boundary)
    throw regime_error("transmission_graphene: boundary configuration");

  GrapheneTransmission out;
  out.regime = zone;
  out.formal = (zone == Regime::klein);
  out.theta = refraction_angle(g);

  const double q1 = barrier_momentum(k).real();
  const double phase = q1 * g.L / g.hbar;
  const double sgn = (g.E > g.V0) ? 1.0 : -1.0;  // sign[E] sign[E - V0], E > 0
  const double num = sgn - std::sin(g.phi) * std::sin(out.theta);
  const double den = std::cos(g.phi) * std::cos(out.theta);
  const double kfac = num / den;
  const double c = std::cos(phase), s = std::sin(phase);
  out.t2 = 1.0 / (c * c + kfac * kfac * s * s);
  return out;
}

// One angular scan cell; boundary/evanescent cells are tagged rather than
// raising, so maps stay total.
struct GrapheneCell {
  double phi = 0.0;
  double scan = 0.0;  // energy or width, per map axis
  double t2 = 0.0;
  double theta = 0.0;
  Regime regime = Regime::diffusion;
  bool formal = false;
  bool valid = false;
};

struct TransmissionMap {
  enum class Axis { energy, width };
  Axis axis = Axis::energy;
  std::vector<double> phi;   // columns
  std::vector<double> scan;  // rows
  std::vector<GrapheneCell> cells;  // row-major, size phi.size() * scan.size()
  const GrapheneCell& at(std::size_t row, std::size_t col) const {
    return cells[row * phi.size() + col];
  }
};

namespace detail {

inline GrapheneCell map_cell(const GrapheneConfig& g, double scan_value) {
  GrapheneCell cell;
  cell.phi = g.phi;
  cell.scan = scan_value;
  try {
    const GrapheneTransmission tr = transmission_graphene(g);
    cell.t2 = tr.t2;
    cell.theta = tr.theta;
    cell.regime = tr.regime;
    cell.formal = tr.formal;
    cell.valid = true;
  } catch (const error&) {
    cell.regime = classify_regime(to_kinematics(g));
    cell.valid = false;
  }
  return cell;
}

}  // namespace detail

// Transmission over a (phi, E) grid at fixed width.
inline TransmissionMap angular_map(double V0, double L,
                                   const std::vector<double>& phis,
                                   const std::vector<double>& energies,
                                   double v_F = 1.0, double hbar = 1.0) {
  TransmissionMap map;
  map.axis = TransmissionMap::Axis::energy;
  map.phi = phis;
  map.scan = energies;
  map.cells.reserve(phis.size() * energies.size());
  for (const double E : energies)
    for (const double phi : phis)
      map.cells.push_back(detail::map_cell({E, V0, phi, L, v_F, hbar}, E));
  return map;
}

// Transmission over a (phi, L) grid at fixed energy.
inline TransmissionMap angular_map_width(double E, double V0,
                                         const std::vector<double>& phis,
                                         const std::vector<double>& widths,
                                         double v_F = 1.0, double hbar = 1.0) {
  TransmissionMap map;
  map.axis = TransmissionMap::Axis::width;
  map.phi = phis;
  map.scan = widths;
  map.cells.reserve(phis.size() * widths.size());
  for (const double L : widths)
    for (const double phi : phis)
      map.cells.push_back(detail::map_cell({E, V0, phi, L, v_F, hbar}, L));
  return map;
}

}  // namespace weylscat
