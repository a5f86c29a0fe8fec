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
#include <random>

#include <weylscat/weylscat.hpp>

namespace wtest {

using weylscat::cplx;
using weylscat::Kinematics;

// Deterministic samplers for the three energy zones. Margins keep every draw
// strictly inside its zone and away from the singular edges (grazing
// incidence, E = V0, and the head-on Klein point where 1 + alpha = 0).
struct Sampler {
  std::mt19937_64 rng;

  explicit Sampler(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  }

  void split_transverse(double ptc, Kinematics& k) {
    const double psi = uniform(0.0, 6.283185307179586);
    k.p2 = ptc * std::cos(psi) / k.c;
    k.p3 = ptc * std::sin(psi) / k.c;
  }

  Kinematics diffusion(bool vary_scales = false) {
    Kinematics k;
    if (vary_scales) {
      k.c = uniform(0.5, 2.0);
      k.hbar = uniform(0.5, 2.0);
    }
    k.V0 = uniform(0.0, 4.0);
    const double ptc = uniform(0.0, 2.0);
    k.E = k.V0 + ptc + uniform(0.05, 5.0);
    split_transverse(ptc, k);
    return k;
  }

  Kinematics klein(bool vary_scales = false) {
    Kinematics k;
    if (vary_scales) {
      k.c = uniform(0.5, 2.0);
      k.hbar = uniform(0.5, 2.0);
    }
    k.E = uniform(0.2, 2.0);
    const double ptc = uniform(0.02, 0.9) * k.E;
    k.V0 = k.E + ptc + uniform(0.05, 4.0);
    split_transverse(ptc, k);
    return k;
  }

  Kinematics evanescent() {
    Kinematics k;
    k.E = uniform(1.0, 3.0);
    const double ptc = uniform(0.2, 0.95) * k.E;
    k.V0 = k.E - uniform(-0.9, 0.9) * ptc;
    split_transverse(ptc, k);
    return k;
  }
};

// Residuals of the defining continuity conditions, scaled by the largest
// participating component. These close the loop independently of the alpha
// algebra: a solution with zero residual is the solution.
namespace detail {

inline double resid2(const cplx& a, const cplx& b) {
  return std::sqrt(std::norm(a) + std::norm(b));
}

}  // namespace detail

inline double step1_residual(const Kinematics& k, cplx r, cplx t) {
  using namespace weylscat;
  const double p1 = longitudinal_momentum(k);
  const double q1 = barrier_momentum(k).real();
  const Spinor up = spinor(p1, k.p2, k.p3, k.E, k.c);
  const Spinor um = spinor(-p1, k.p2, k.p3, k.E, k.c);
  const Spinor vp = spinor(q1, k.p2, k.p3, k.E - k.V0, k.c);
  const cplx e1 = up.up + r * um.up - t * vp.up;
  const cplx e2 = up.down + r * um.down - t * vp.down;
  return detail::resid2(e1, e2);
}

inline double step2_residual(const Kinematics& k, double L, cplx r, cplx t) {
  using namespace weylscat;
  const double p1 = longitudinal_momentum(k);
  const double q1 = barrier_momentum(k).real();
  const Spinor up = spinor(p1, k.p2, k.p3, k.E, k.c);
  const Spinor vp = spinor(q1, k.p2, k.p3, k.E - k.V0, k.c);
  const Spinor vm = spinor(-q1, k.p2, k.p3, k.E - k.V0, k.c);
  const cplx eq = std::exp(cplx(0.0, q1 * L / k.hbar));
  const cplx ep = std::exp(cplx(0.0, p1 * L / k.hbar));
  const cplx e1 = vp.up * eq + r * vm.up / eq - t * up.up * ep;
  const cplx e2 = vp.down * eq + r * vm.down / eq - t * up.down * ep;
  return detail::resid2(e1, e2);
}

inline double step3_residual(const Kinematics& k, cplx r, cplx t) {
  using namespace weylscat;
  const double p1 = longitudinal_momentum(k);
  const double q1 = barrier_momentum(k).real();
  const Spinor um = spinor(-p1, k.p2, k.p3, k.E, k.c);
  const Spinor vp = spinor(q1, k.p2, k.p3, k.E - k.V0, k.c);
  const Spinor vm = spinor(-q1, k.p2, k.p3, k.E - k.V0, k.c);
  const cplx e1 = vm.up + r * vp.up - t * um.up;
  const cplx e2 = vm.down + r * vp.down - t * um.down;
  return detail::resid2(e1, e2);
}

// Residual of all four barrier matching conditions for a full interior
// solution (r, A, B, t).
inline double barrier_residual(const weylscat::BarrierConfig& cfg, cplx r, cplx A,
                               cplx B, cplx t) {
  using namespace weylscat;
  const Kinematics& k = cfg.kin;
  const double p1 = longitudinal_momentum(k);
  const double q1 = barrier_momentum(k).real();
  const Spinor up = spinor(p1, k.p2, k.p3, k.E, k.c);
  const Spinor um = spinor(-p1, k.p2, k.p3, k.E, k.c);
  const Spinor vp = spinor(q1, k.p2, k.p3, k.E - k.V0, k.c);
  const Spinor vm = spinor(-q1, k.p2, k.p3, k.E - k.V0, k.c);
  const cplx eq = std::exp(cplx(0.0, q1 * cfg.L / k.hbar));
  const cplx ep = std::exp(cplx(0.0, p1 * cfg.L / k.hbar));
  const cplx e1 = up.up + r * um.up - A * vp.up - B * vm.up;
  const cplx e2 = up.down + r * um.down - A * vp.down - B * vm.down;
  const cplx e3 = A * vp.up * eq + B * vm.up / eq - t * up.up * ep;
  const cplx e4 = A * vp.down * eq + B * vm.down / eq - t * up.down * ep;
  return std::sqrt(std::norm(e1) + std::norm(e2) + std::norm(e3) + std::norm(e4));
}

// Reverse-side matching factors, computed from scratch: beta plays alpha's
// role for the interior wave leaving through the down-step (sides swapped,
// potential drop -V0), gamma the same for the left-mover at the up-step.
inline cplx beta_reverse(const Kinematics& k) {
  const double p1c = weylscat::longitudinal_momentum(k) * k.c;
  const double q1c = weylscat::barrier_momentum(k).real() * k.c;
  return (p1c * (k.E - k.V0 + k.p3 * k.c) - cplx(0.0, k.p2 * k.c * k.V0)) /
         (q1c * (k.E + k.p3 * k.c));
}

inline cplx gamma_reverse(const Kinematics& k) {
  const double p1c = weylscat::longitudinal_momentum(k) * k.c;
  const double q1c = weylscat::barrier_momentum(k).real() * k.c;
  return (-p1c * (k.E - k.V0 + k.p3 * k.c) - cplx(0.0, k.p2 * k.c * k.V0)) /
         (-q1c * (k.E + k.p3 * k.c));
}

}  // namespace wtest
