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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "barrier.hpp"
#include "detail/gauss_legendre.hpp"
#include "kinematics.hpp"

namespace weylscat {

// Wave-packet realization of the barrier problem.
//
// The stationary solutions are exact at every energy, so a packet is just a
// spectral superposition: Gaussian envelope g(E) ~ exp(-(E-E0)^2 / 4 sigma^2)
// sampled with Gauss-Legendre nodes on a hard window [E0 - k sigma,
// E0 + k sigma], each node carrying its exact region-wise solution and the
// time phase exp(-i E t / hbar). No PDE discretization, hence no numerical
// dispersion; the only error sources are quadrature resolution and the grid
// norm integrals.
//
// Two evolution modes:
//   full:     region coefficients (r, A, B, t) from the continuity solve, the
//             exact dynamics.
//   per_term: coefficients from the multiple-reflection ladder truncated at
//             series_terms loop passes, so each outgoing packet (one per
//             pass) is individually resolvable.
struct WavePacketSpec {
  double E0 = 2.0;          // center energy
  double sigma_E = 0.05;    // spectral width
  double p2 = 0.0;          // fixed transverse momenta (no transverse spread)
  double p3 = 0.0;
  double x0 = -50.0;        // launch center, < 0
  double x_min = -200.0;    // spatial grid
  double x_max = 200.0;
  std::size_t n_x = 2048;
  std::size_t n_E = 257;       // spectral samples
  double window_k = 5.0;       // window half-width in sigmas
  bool allow_mixed = false;    // permit windows crossing a regime boundary
  std::size_t series_terms = 4;  // ladder truncation for per_term mode
};

struct SpectralSample {
  double E;
  double weight;     // Gauss-Legendre weight
  double envelope;   // normalized g(E)
  double p1;         // incoming longitudinal momentum
  cplx q1;           // interior longitudinal momentum
  Regime regime;
};

struct SpectralTable {
  std::vector<SpectralSample> samples;
  double e_lo = 0.0, e_hi = 0.0;
};

namespace detail {

// Group speeds of the massless dispersion, outside and inside the barrier.
inline double speed_incident(const Kinematics& k) {
  return k.c * k.c * longitudinal_momentum(k) / k.E;
}
inline double speed_interior(const Kinematics& k) {
  return k.c * k.c * barrier_momentum(k).real() / std::abs(k.E - k.V0);
}

inline Kinematics at_energy(const Kinematics& pattern, double E, double p2, double p3) {
  Kinematics k = pattern;
  k.E = E;
  k.p2 = p2;
  k.p3 = p3;
  return k;
}

}  // namespace detail

// Spectral amplitude table. pattern supplies V0, c and hbar (its E, p2, p3
// fields are ignored; the packet's own values apply). The envelope is
// normalized so the incoming packet carries unit norm in the continuum
// measure: 2 pi hbar sum_j w_j g_j^2 v1_j = 1, which the spatial grid norm
// then reproduces to quadrature accuracy.
inline SpectralTable build_packet(const WavePacketSpec& spec, const Kinematics& pattern) {
  if (!(spec.sigma_E > 0.0)) throw domain_error("packet: sigma_E must be > 0");
  if (!(spec.x0 < 0.0)) throw domain_error("packet: x0 must be < 0");
  if (spec.n_E < 16 || spec.n_x < 16)
    throw domain_error("packet: n_E and n_x must be >= 16");
  if (!(spec.window_k > 0.0)) throw domain_error("packet: window_k must be > 0");

  SpectralTable table;
  table.e_lo = spec.E0 - spec.window_k * spec.sigma_E;
  table.e_hi = spec.E0 + spec.window_k * spec.sigma_E;
  const double ptc = std::hypot(spec.p2 * pattern.c, spec.p3 * pattern.c);
  if (!(table.e_lo > ptc))
    throw domain_error("packet: window reaches below the propagation threshold E = pt c");

  const auto rule = detail::gauss_legendre(spec.n_E, table.e_lo, table.e_hi);
  table.samples.resize(spec.n_E);
  bool mixed = false;
  const Regime first =
      classify_regime(detail::at_energy(pattern, table.e_lo, spec.p2, spec.p3));
  double norm_acc = 0.0;
  for (std::size_t j = 0; j < spec.n_E; ++j) {
    SpectralSample& s = table.samples[j];
    s.E = rule.node[j];
    s.weight = rule.weight[j];
    const Kinematics k = detail::at_energy(pattern, s.E, spec.p2, spec.p3);
    s.p1 = longitudinal_momentum(k);
    s.q1 = barrier_momentum(k);
    s.regime = classify_regime(k);
    if (s.regime != first || s.regime == Regime::boundary) mixed = true;
    const double d = (s.E - spec.E0) / spec.sigma_E;
    s.envelope = std::exp(-0.25 * d * d);
    norm_acc += s.weight * s.envelope * s.envelope * detail::speed_incident(k);
  }
  if (classify_regime(detail::at_energy(pattern, table.e_hi, spec.p2, spec.p3)) != first)
    mixed = true;
  if (mixed && !spec.allow_mixed)
    throw regime_error("packet: spectral window crosses a regime boundary");

  const double pi = 3.14159265358979323846;
  const double scale = 1.0 / std::sqrt(2.0 * pi * pattern.hbar * norm_acc);
  for (auto& s : table.samples) s.envelope *= scale;
  return table;
}

// Spatial width of the free packet: the intensity |psi|^2 has standard
// deviation hbar v1(E0) / (2 sigma_E).
inline double packet_width(const WavePacketSpec& spec, const Kinematics& pattern) {
  const Kinematics k0 = detail::at_energy(pattern, spec.E0, spec.p2, spec.p3);
  return pattern.hbar * detail::speed_incident(k0) / (2.0 * spec.sigma_E);
}

enum class EvolveMode { full, per_term };

struct PacketState {
  double time = 0.0;
  double L = 0.0;
  std::vector<double> x;
  std::vector<cplx> psi_up;    // first spinor component over the grid
  std::vector<cplx> psi_down;  // second spinor component
  double p_reflected = 0.0;    // trapezoid norm over x < 0
  double p_barrier = 0.0;      // 0 <= x <= L
  double p_transmitted = 0.0;  // x > L
  double total_norm() const { return p_reflected + p_barrier + p_transmitted; }
};

namespace detail {

struct RegionAmps {
  cplx r, A, B, t;
};

// Ladder truncation after `terms` loop passes (pass indices 0..terms).
inline RegionAmps per_term_amps(const Kinematics& k, double L, std::size_t terms) {
  const AlphaFactor af = alpha_factor(k);
  const StepResult s1 = step1(af);
  const StepResult s2 = step2(k, L, af);
  const StepResult s3 = step3(af);
  const cplx loop = s2.r * s3.r;
  cplx ladder = 0.0, gain = 1.0;
  for (std::size_t s = 0; s <= terms; ++s) {
    ladder += gain;
    gain *= loop;
  }
  return RegionAmps{s1.r + s1.t * s2.r * s3.t * ladder, s1.t * ladder,
                    s1.t * s2.r * ladder, s1.t * s2.t * ladder};
}

}  // namespace detail

// Superpose the stationary solutions at time t. cfg.kin supplies V0, c, hbar;
// energy and transverse momenta come from the packet spec. Requires the whole
// spectral window in the diffusion zone.
inline PacketState evolve(const WavePacketSpec& spec, const BarrierConfig& cfg,
                          double t, EvolveMode mode = EvolveMode::full) {
  validate(cfg);
  if (!(t >= 0.0)) throw domain_error("evolve: t must be >= 0");
  if (!(spec.x_min < spec.x_max)) throw domain_error("evolve: empty spatial grid");

  const SpectralTable table = build_packet(spec, cfg.kin);
  for (const auto& s : table.samples)
    if (s.regime != Regime::diffusion)
      throw regime_error("evolve: spectral window must lie in the diffusion zone");

  const double hbar = cfg.kin.hbar;

  // Sampling checks. Adjacent-node spacing in p1 sets the distance at which
  // the discrete superposition repeats itself (grid must not see the alias
  // image); spacing in E sets the recurrence time; spacing in q1 must resolve
  // the fastest retained interior winding exp(2 i s q1 L / hbar).
  double gap_e = 0.0, gap_p1 = 0.0, gap_q1 = 0.0;
  for (std::size_t j = 1; j < table.samples.size(); ++j) {
    gap_e = std::max(gap_e, table.samples[j].E - table.samples[j - 1].E);
    gap_p1 = std::max(gap_p1, table.samples[j].p1 - table.samples[j - 1].p1);
    gap_q1 = std::max(gap_q1,
                      table.samples[j].q1.real() - table.samples[j - 1].q1.real());
  }
  const double pi = 3.14159265358979323846;
  const double span = spec.x_max - spec.x_min;
  if (span * gap_p1 > 0.8 * 2.0 * pi * hbar)
    throw quadrature_error("evolve: n_E too small for the grid extent (alias length)");
  if (t * gap_e > 0.8 * 2.0 * pi * hbar)
    throw quadrature_error("evolve: n_E too small for the requested time (recurrence)");
  const double loop2 = std::norm(
      loop_factor({detail::at_energy(cfg.kin, spec.E0, spec.p2, spec.p3), cfg.L}));
  std::size_t s_eff = 1;
  if (mode == EvolveMode::per_term)
    s_eff = std::max<std::size_t>(1, spec.series_terms);
  else if (loop2 > 1e-12 && loop2 < 1.0)
    s_eff = (std::size_t)std::ceil(std::log(1e-6) / std::log(loop2)) + 1;
  if (2.0 * s_eff * cfg.L * gap_q1 > 0.9 * pi * hbar)
    throw quadrature_error("evolve: n_E too small to resolve the interior windings");

  PacketState st;
  st.time = t;
  st.L = cfg.L;
  st.x.resize(spec.n_x);
  st.psi_up.assign(spec.n_x, cplx(0.0));
  st.psi_down.assign(spec.n_x, cplx(0.0));
  const double dx = span / (double)(spec.n_x - 1);
  for (std::size_t i = 0; i < spec.n_x; ++i) st.x[i] = spec.x_min + dx * (double)i;

  for (const auto& s : table.samples) {
    const Kinematics k = detail::at_energy(cfg.kin, s.E, spec.p2, spec.p3);
    detail::RegionAmps amp;
    if (mode == EvolveMode::full) {
      const InteriorSolution sol = continuity_solution({k, cfg.L});
      amp = detail::RegionAmps{sol.r, sol.A, sol.B, sol.t};
    } else {
      amp = detail::per_term_amps(k, cfg.L, spec.series_terms);
    }
    const double q1 = s.q1.real();
    const Spinor up = spinor(s.p1, spec.p2, spec.p3, s.E, k.c);
    const Spinor um = spinor(-s.p1, spec.p2, spec.p3, s.E, k.c);
    const Spinor vp = spinor(q1, spec.p2, spec.p3, s.E - k.V0, k.c);
    const Spinor vm = spinor(-q1, spec.p2, spec.p3, s.E - k.V0, k.c);
    // Launch phase centers the packet at x0; time phase advances it.
    const cplx w = s.weight * s.envelope *
                   std::exp(cplx(0.0, -(s.p1 * spec.x0 + s.E * t) / hbar));
    for (std::size_t i = 0; i < spec.n_x; ++i) {
      const double x = st.x[i];
      cplx a_up, a_dn;
      if (x < 0.0) {
        const cplx f = std::exp(cplx(0.0, s.p1 * x / hbar));
        a_up = f * up.up + amp.r / f * um.up;
        a_dn = f * up.down + amp.r / f * um.down;
      } else if (x <= cfg.L) {
        const cplx f = std::exp(cplx(0.0, q1 * x / hbar));
        a_up = amp.A * f * vp.up + amp.B / f * vm.up;
        a_dn = amp.A * f * vp.down + amp.B / f * vm.down;
      } else {
        const cplx f = std::exp(cplx(0.0, s.p1 * x / hbar));
        a_up = amp.t * f * up.up;
        a_dn = amp.t * f * up.down;
      }
      st.psi_up[i] += w * a_up;
      st.psi_down[i] += w * a_dn;
    }
  }

  // Region norms by trapezoid, each interval attributed to the region of its
  // midpoint; the three pieces sum to the full-grid trapezoid exactly.
  auto density = [&](std::size_t i) {
    return std::norm(st.psi_up[i]) + std::norm(st.psi_down[i]);
  };
  for (std::size_t i = 0; i + 1 < spec.n_x; ++i) {
    const double piece = 0.5 * (density(i) + density(i + 1)) * dx;
    const double mid = 0.5 * (st.x[i] + st.x[i + 1]);
    if (mid < 0.0)
      st.p_reflected += piece;
    else if (mid <= cfg.L)
      st.p_barrier += piece;
    else
      st.p_transmitted += piece;
  }
  return st;
}

// Connected components of |psi|^2 above threshold_frac * peak, restricted to
// the transmitted region x > L. Returned right-to-left (arrival order).
struct Hump {
  double x_left, x_right;  // component bounds
  double x_peak;
  double norm;             // trapezoid integral over the component
};

inline std::vector<Hump> transmitted_humps(const PacketState& st,
                                           double threshold_frac = 1e-4) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < st.x.size(); ++i)
    if (st.x[i] > st.L) idx.push_back(i);
  if (idx.size() < 3) return {};

  auto density = [&](std::size_t i) {
    return std::norm(st.psi_up[i]) + std::norm(st.psi_down[i]);
  };
  double peak = 0.0;
  for (auto i : idx) peak = std::max(peak, density(i));
  if (!(peak > 0.0)) return {};
  const double thr = threshold_frac * peak;

  std::vector<Hump> humps;
  std::size_t k = 0;
  while (k < idx.size()) {
    if (density(idx[k]) <= thr) {
      ++k;
      continue;
    }
    Hump h{st.x[idx[k]], st.x[idx[k]], st.x[idx[k]], 0.0};
    double best = 0.0;
    std::size_t start = k;
    while (k < idx.size() && density(idx[k]) > thr) {
      if (density(idx[k]) > best) {
        best = density(idx[k]);
        h.x_peak = st.x[idx[k]];
      }
      h.x_right = st.x[idx[k]];
      ++k;
    }
    for (std::size_t i = start; i + 1 < k; ++i)
      h.norm += 0.5 * (density(idx[i]) + density(idx[i + 1])) *
                (st.x[idx[i + 1]] - st.x[idx[i]]);
    humps.push_back(h);
  }
  // drop ringing fragments of the windowed spectrum: anything carrying less
  // than threshold_frac of the dominant hump's probability is not an echo
  double norm_peak = 0.0;
  for (const Hump& h : humps) norm_peak = std::max(norm_peak, h.norm);
  std::erase_if(humps, [&](const Hump& h) {
    return h.norm < threshold_frac * norm_peak;
  });
  std::sort(humps.begin(), humps.end(),
            [](const Hump& a, const Hump& b) { return a.x_peak > b.x_peak; });
  return humps;
}

// Grid, launch point and sampling chosen automatically for a barrier of
// width L, sized so every hump above the 1e-4 tail threshold fits on the
// grid at time t_end with all significant spectral components drained out of
// the barrier region.
struct AutoGeometry {
  WavePacketSpec spec;
  double t_end = 0.0;
};

inline AutoGeometry auto_geometry(const WavePacketSpec& base,
                                  const Kinematics& pattern, double L) {
  if (!(L > 0.0)) throw domain_error("auto_geometry: L must be > 0");
  WavePacketSpec spec = base;
  const Kinematics k0 = detail::at_energy(pattern, spec.E0, spec.p2, spec.p3);
  if (classify_regime(k0) != Regime::diffusion)
    throw regime_error("auto_geometry: center energy must be in the diffusion zone");

  const double w = packet_width(spec, pattern);
  const double v1 = detail::speed_incident(k0);
  const double v2 = detail::speed_interior(k0);
  const double loop2 = std::norm(loop_factor({k0, L}));

  std::size_t n_h = 2;
  if (loop2 > 1e-12 && loop2 < 1.0)
    n_h = std::max<std::size_t>(2, (std::size_t)std::ceil(std::log(1e-4) / std::log(loop2)));

  // Interior dispersion: slower window components lag by roughly
  // (passes) * L * d(1/v2)/dE per unit energy offset.
  const double h = spec.sigma_E;
  const double d_inv_v2 =
      std::abs(1.0 / detail::speed_interior(
                         detail::at_energy(pattern, spec.E0 + h, spec.p2, spec.p3)) -
               1.0 / detail::speed_interior(
                         detail::at_energy(pattern, spec.E0 - h, spec.p2, spec.p3))) /
      (2.0 * h);
  const double lag = (2.0 * (double)n_h + 1.0) * L * d_inv_v2 * 3.0 * spec.sigma_E;

  const double margin = 8.0 * w;
  spec.x0 = -margin;
  const double t_arrive = margin / v1;
  const double t_end =
      t_arrive + (2.0 * (double)n_h + 1.0) * L / v2 + 4.0 * w / v1 + lag;

  spec.x_min = -(v1 * (t_end - t_arrive) + margin + v1 * lag);
  spec.x_max = L + v1 * (t_end - t_arrive - L / v2) + margin;
  const double span = spec.x_max - spec.x_min;
  const double dx = w / 12.0;
  spec.n_x = std::clamp<std::size_t>((std::size_t)std::ceil(span / dx) + 1, 512, 400000);

  // Required spectral spacing, from the three resolution constraints checked
  // by evolve (alias length, recurrence time, interior windings).
  const Kinematics klo =
      detail::at_energy(pattern, spec.E0 - spec.window_k * spec.sigma_E, spec.p2, spec.p3);
  const double v1_lo = detail::speed_incident(klo);
  const double v2_lo = detail::speed_interior(klo);
  const double pi = 3.14159265358979323846;
  std::size_t s_eff = 1;
  if (loop2 > 1e-12 && loop2 < 1.0)
    s_eff = (std::size_t)std::ceil(std::log(1e-6) / std::log(loop2)) + 1;
  s_eff = std::max(s_eff, spec.series_terms);
  double gap = 0.7 * 2.0 * pi * pattern.hbar * v1_lo / (1.3 * span);
  gap = std::min(gap, 0.7 * 2.0 * pi * pattern.hbar / t_end);
  gap = std::min(gap, 0.8 * pi * pattern.hbar * v2_lo / (2.0 * (double)s_eff * L));
  const double halfwidth = spec.window_k * spec.sigma_E;
  std::size_t n_e = (std::size_t)std::ceil(pi * halfwidth / gap) + 2;
  n_e = std::clamp<std::size_t>(n_e, 33, 20001);
  n_e |= 1;  // odd keeps a node pinned near E0
  spec.n_E = std::max(spec.n_E, n_e);
  return AutoGeometry{spec, t_end};
}

// Long-time transmitted probability versus barrier width, with the two
// analytic references: the coherent value |t(E0)|^2 and the incoherent
// geometric-sum split.
struct CrossoverPoint {
  double L = 0.0;
  double l_over_width = 0.0;
  double p_transmitted = 0.0;
  double coherent_ref = 0.0;    // |t(E0)|^2
  double incoherent_ref = 0.0;  // T_inc
};

inline std::vector<CrossoverPoint> coherence_crossover(
    const WavePacketSpec& base, const Kinematics& pattern,
    const std::vector<double>& widths) {
  std::vector<CrossoverPoint> out;
  out.reserve(widths.size());
  const Kinematics k0 = detail::at_energy(pattern, base.E0, base.p2, base.p3);
  const double w = packet_width(base, pattern);
  for (const double L : widths) {
    const AutoGeometry geo = auto_geometry(base, pattern, L);
    const BarrierConfig cfg{detail::at_energy(pattern, base.E0, base.p2, base.p3), L};
    const PacketState st = evolve(geo.spec, cfg, geo.t_end, EvolveMode::full);
    CrossoverPoint pt;
    pt.L = L;
    pt.l_over_width = L / w;
    pt.p_transmitted = st.p_transmitted;
    pt.coherent_ref = std::norm(closed_form({k0, L}).t);
    pt.incoherent_ref = incoherent_probabilities(k0).transmission;
    out.push_back(pt);
  }
  return out;
}

}  // namespace weylscat
