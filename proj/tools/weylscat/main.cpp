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

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <weylscat/io/scan.hpp>

#include "common.hpp"

namespace wtool {

namespace ws = weylscat;

// ---------------------------------------------------------------------------
// shared option plumbing

void add_sweep_options(CLI::App* sub, Sweep& sw, const std::vector<std::string>& allowed) {
  auto* p = sub->add_option("--sweep", sw.param, "parameter to scan over a linear grid")
                ->transform(CLI::IsMember(allowed));
  auto* f = sub->add_option("--from", sw.from, "scan start value");
  auto* t = sub->add_option("--to", sw.to, "scan end value");
  sub->add_option("--steps", sw.steps, "scan point count")->check(CLI::PositiveNumber);
  p->needs(f)->needs(t);
  f->needs(p);
  t->needs(p);
}

using OptD = std::optional<double>;
using OptC = std::optional<cplx>;

void add_opt(ws::io::Record& rec, const std::string& key, const OptD& v) {
  if (v)
    rec.add(key, *v);
  else
    rec.add_null(key);
}

void add_opt(ws::io::Record& rec, const std::string& key, const OptC& v) {
  if (v)
    add_complex(rec, key, *v);
  else
    add_complex_null(rec, key);
}

void add_opt_bool(ws::io::Record& rec, const std::string& key, const std::optional<bool>& v) {
  if (v)
    rec.add(key, *v);
  else
    rec.add_null(key);
}

std::string join_err(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "; " + b;
}

// ---------------------------------------------------------------------------
// step

struct StepArgs {
  double E = 1.0, V0 = 0.0, p2 = 0.0, p3 = 0.0;
  Sweep sweep;
};

int run_step(const GlobalOpts& g, const StepArgs& a) {
  auto target = open_output(g);
  auto writer = ws::io::make_writer(parse_format(g), *target.os);
  const std::string xkey = a.sweep.param.empty() ? "E" : a.sweep.param;
  PlotTap tap(*writer, !g.plot.empty(), xkey, {"r0_abs2"});

  ws::io::run_ordered(
      a.sweep.count(), g.threads,
      [&](std::size_t i) {
        Kinematics k = base_kinematics(g);
        k.E = a.E;
        k.V0 = a.V0;
        k.p2 = a.p2;
        k.p3 = a.p3;
        if (!a.sweep.param.empty()) {
          const double v = a.sweep.value(i);
          if (a.sweep.param == "E") k.E = v;
          else if (a.sweep.param == "V0") k.V0 = v;
          else if (a.sweep.param == "p2") k.p2 = v;
          else k.p3 = v;
        }

        ws::io::Record rec;
        prelude(rec, "step", (std::int64_t)i, g);
        rec.add("E", k.E);
        rec.add("V0", k.V0);
        rec.add("p2", k.p2);
        rec.add("p3", k.p3);

        std::string err;
        std::optional<std::string> regime;
        OptD p1, nfac, r0_abs2;
        OptC q1, alpha, r0, t0;
        try {
          ws::validate(k);
          const ws::Regime zone = ws::classify_regime(k);
          regime = ws::to_string(zone);
          p1 = ws::longitudinal_momentum(k);
          q1 = ws::barrier_momentum(k);
          if (zone == ws::Regime::diffusion || zone == ws::Regime::klein) {
            try {
              const ws::AlphaFactor af = ws::alpha_factor(k);
              const ws::StepResult s1 = ws::step1(af);
              alpha = af.alpha;
              nfac = af.n;
              r0 = s1.r;
              t0 = s1.t;
            } catch (const ws::error& e) {
              err = e.what();
            }
          } else if (zone == ws::Regime::boundary) {
            err = "boundary configuration: amplitudes skipped";
          }
          // Total step reflection; defined in every zone (1 when evanescent).
          try {
            r0_abs2 = ws::step_reflection_probability(k);
          } catch (const ws::error& e) {
            err = join_err(err, e.what());
          }
        } catch (const ws::error& e) {
          err = e.what();
        }

        if (regime)
          rec.add("regime", *regime);
        else
          rec.add_null("regime");
        add_opt(rec, "p1", p1);
        add_opt(rec, "q1", q1);
        add_opt(rec, "alpha", alpha);
        add_opt(rec, "norm_factor", nfac);
        add_opt(rec, "r0", r0);
        add_opt(rec, "t0", t0);
        add_opt(rec, "r0_abs2", r0_abs2);
        add_error(rec, err);
        return rec;
      },
      tap);

  write_plot_file(g, tap, "single-step reflection", xkey, "|r0|^2");
  return 0;
}

// ---------------------------------------------------------------------------
// barrier

struct BarrierArgs {
  double E = 3.0, V0 = 1.0, p2 = 1.0, p3 = 0.0, L = 1.0;
  std::string method = "all";
  bool formal = false;
  std::size_t max_terms = 10000;
  double tol = 1e-12;
  Sweep sweep;
};

int run_barrier(const GlobalOpts& g, const BarrierArgs& a) {
  const bool want_closed = a.method == "closed" || a.method == "all";
  const bool want_series = a.method == "series" || a.method == "all";
  const bool want_matrix = a.method == "matrix" || a.method == "all";

  auto target = open_output(g);
  auto writer = ws::io::make_writer(parse_format(g), *target.os);
  const std::string xkey = a.sweep.param.empty() ? "E" : a.sweep.param;
  std::vector<std::string> ykeys;
  if (want_closed) ykeys.push_back("closed_T");
  if (want_series) ykeys.push_back("series_T");
  if (want_matrix) ykeys.push_back("matrix_T");
  PlotTap tap(*writer, !g.plot.empty(), xkey, ykeys);

  ws::io::run_ordered(
      a.sweep.count(), g.threads,
      [&](std::size_t i) {
        ws::BarrierConfig cfg;
        cfg.kin = base_kinematics(g);
        cfg.kin.E = a.E;
        cfg.kin.V0 = a.V0;
        cfg.kin.p2 = a.p2;
        cfg.kin.p3 = a.p3;
        cfg.L = a.L;
        if (!a.sweep.param.empty()) {
          const double v = a.sweep.value(i);
          if (a.sweep.param == "E") cfg.kin.E = v;
          else if (a.sweep.param == "V0") cfg.kin.V0 = v;
          else if (a.sweep.param == "p2") cfg.kin.p2 = v;
          else if (a.sweep.param == "p3") cfg.kin.p3 = v;
          else cfg.L = v;
        }

        ws::io::Record rec;
        prelude(rec, "barrier", (std::int64_t)i, g);
        rec.add("E", cfg.kin.E);
        rec.add("V0", cfg.kin.V0);
        rec.add("p2", cfg.kin.p2);
        rec.add("p3", cfg.kin.p3);
        rec.add("L", cfg.L);

        std::string err;
        std::optional<std::string> regime;
        OptC loop, closed_t, closed_r, series_t, series_r, matrix_t, matrix_r;
        OptD closed_T, closed_R, series_T, series_R, matrix_T, matrix_R;
        OptD condition, delta_max;
        std::optional<bool> closed_formal, series_convergent;
        std::optional<std::int64_t> series_passes;

        bool usable = false;
        try {
          ws::validate(cfg);
          const ws::Regime zone = ws::classify_regime(cfg.kin);
          regime = ws::to_string(zone);
          if (zone == ws::Regime::evanescent)
            err = "evanescent zone: only the single-step |r0| = 1 is defined";
          else
            usable = true;
        } catch (const ws::error& e) {
          err = e.what();
        }

        if (usable) {
          try {
            loop = ws::loop_factor(cfg);
          } catch (const ws::error& e) {
            err = join_err(err, e.what());
          }
          if (want_closed) {
            try {
              const ws::BarrierResult res = ws::closed_form(
                  cfg, a.formal ? ws::KleinPolicy::formal : ws::KleinPolicy::forbid);
              closed_t = res.t;
              closed_r = res.r;
              closed_T = std::norm(res.t);
              closed_R = std::norm(res.r);
              closed_formal = res.formal;
            } catch (const ws::error& e) {
              err = join_err(err, e.what());
            }
          }
          if (want_series) {
            try {
              const ws::SeriesExpansion ex = ws::series_expand(cfg, a.max_terms, a.tol);
              series_convergent = ex.convergent;
              series_passes = (std::int64_t)ex.truncation_index;
              if (!loop) loop = ex.loop;
              if (ex.convergent) {
                series_t = ex.summed_t();
                series_r = ex.summed_r();
                series_T = std::norm(*series_t);
                series_R = std::norm(*series_r);
              }
            } catch (const ws::error& e) {
              err = join_err(err, e.what());
            }
          }
          if (want_matrix) {
            try {
              const ws::BarrierResult res = ws::matrix_solve(cfg);
              matrix_t = res.t;
              matrix_r = res.r;
              matrix_T = std::norm(res.t);
              matrix_R = std::norm(res.r);
              condition = res.condition;
            } catch (const ws::error& e) {
              err = join_err(err, e.what());
            }
          }
          if (a.method == "all") {
            std::vector<std::pair<cplx, cplx>> got;
            if (closed_t) got.emplace_back(*closed_t, *closed_r);
            if (series_t) got.emplace_back(*series_t, *series_r);
            if (matrix_t) got.emplace_back(*matrix_t, *matrix_r);
            if (got.size() >= 2) {
              double d = 0.0;
              for (std::size_t x = 0; x < got.size(); ++x)
                for (std::size_t y = x + 1; y < got.size(); ++y) {
                  d = std::max(d, std::abs(got[x].first - got[y].first));
                  d = std::max(d, std::abs(got[x].second - got[y].second));
                }
              delta_max = d;
            }
          }
        }

        if (regime)
          rec.add("regime", *regime);
        else
          rec.add_null("regime");
        add_opt(rec, "loop", loop);
        add_opt(rec, "loop_abs", loop ? OptD(std::abs(*loop)) : OptD());
        if (want_closed) {
          add_opt_bool(rec, "closed_formal", closed_formal);
          add_opt(rec, "closed_t", closed_t);
          add_opt(rec, "closed_r", closed_r);
          add_opt(rec, "closed_T", closed_T);
          add_opt(rec, "closed_R", closed_R);
        }
        if (want_series) {
          add_opt_bool(rec, "series_convergent", series_convergent);
          if (series_passes)
            rec.add("series_passes", *series_passes);
          else
            rec.add_null("series_passes");
          add_opt(rec, "series_t", series_t);
          add_opt(rec, "series_r", series_r);
          add_opt(rec, "series_T", series_T);
          add_opt(rec, "series_R", series_R);
        }
        if (want_matrix) {
          add_opt(rec, "matrix_t", matrix_t);
          add_opt(rec, "matrix_r", matrix_r);
          add_opt(rec, "matrix_T", matrix_T);
          add_opt(rec, "matrix_R", matrix_R);
          add_opt(rec, "matrix_condition", condition);
        }
        if (a.method == "all") add_opt(rec, "delta_max", delta_max);
        add_error(rec, err);
        return rec;
      },
      tap);

  write_plot_file(g, tap, "barrier transmission", xkey, "|t|^2");
  return 0;
}

// ---------------------------------------------------------------------------
// series (term-by-term expansion at a single point)

struct SeriesArgs {
  double E = 3.0, V0 = 1.0, p2 = 1.0, p3 = 0.0, L = 1.0;
  std::size_t max_terms = 32;
  double tol = 1e-12;
};

int run_series(const GlobalOpts& g, const SeriesArgs& a) {
  ws::BarrierConfig cfg;
  cfg.kin = base_kinematics(g);
  cfg.kin.E = a.E;
  cfg.kin.V0 = a.V0;
  cfg.kin.p2 = a.p2;
  cfg.kin.p3 = a.p3;
  cfg.L = a.L;

  std::string err;
  std::optional<std::string> regime;
  ws::SeriesExpansion ex;
  bool ok = false;
  try {
    regime = ws::to_string(ws::classify_regime(cfg.kin));
    ex = ws::series_expand(cfg, a.max_terms, a.tol);
    ok = true;
  } catch (const ws::error& e) {
    err = e.what();
  }

  auto target = open_output(g);
  auto writer = ws::io::make_writer(parse_format(g), *target.os);
  PlotTap tap(*writer, !g.plot.empty(), "contribution",
              {"partial_t_abs2", "partial_r_abs2"});

  // Row i pairs the reflection contribution that exits after i interior wall
  // hits with the transmission term carrying i-1 completed loops; row 0 is
  // the prompt front-wall reflection alone.
  const std::size_t count = ok ? ex.terms_r.size() : 1;
  ws::io::run_ordered(
      count, g.threads,
      [&](std::size_t i) {
        ws::io::Record rec;
        prelude(rec, "series", (std::int64_t)i, g);
        rec.add("E", cfg.kin.E);
        rec.add("V0", cfg.kin.V0);
        rec.add("p2", cfg.kin.p2);
        rec.add("p3", cfg.kin.p3);
        rec.add("L", cfg.L);
        if (regime)
          rec.add("regime", *regime);
        else
          rec.add_null("regime");
        rec.add("contribution", (std::int64_t)i);

        OptC loop, term_t, partial_t, term_r, partial_r;
        std::optional<bool> convergent;
        if (ok) {
          loop = ex.loop;
          convergent = ex.convergent;
          term_r = ex.terms_r[i];
          partial_r = ex.partial_sums_r[i];
          if (i >= 1 && i - 1 < ex.terms_t.size()) {
            term_t = ex.terms_t[i - 1];
            partial_t = ex.partial_sums_t[i - 1];
          }
        }
        add_opt_bool(rec, "convergent", convergent);
        add_opt(rec, "loop", loop);
        add_opt(rec, "loop_abs", loop ? OptD(std::abs(*loop)) : OptD());
        add_opt(rec, "term_t", term_t);
        add_opt(rec, "term_t_abs", term_t ? OptD(std::abs(*term_t)) : OptD());
        add_opt(rec, "partial_t", partial_t);
        add_opt(rec, "partial_t_abs2", partial_t ? OptD(std::norm(*partial_t)) : OptD());
        add_opt(rec, "term_r", term_r);
        add_opt(rec, "term_r_abs", term_r ? OptD(std::abs(*term_r)) : OptD());
        add_opt(rec, "partial_r", partial_r);
        add_opt(rec, "partial_r_abs2", partial_r ? OptD(std::norm(*partial_r)) : OptD());
        add_error(rec, err);
        return rec;
      },
      tap);

  write_plot_file(g, tap, "multiple-reflection partial sums", "contribution",
                  "|partial sum|^2");
  return 0;
}

// ---------------------------------------------------------------------------
// klein-report

struct KleinArgs {
  double E = 1.0, V0 = 3.0, p2 = 0.5, p3 = 0.0, L = 1.0;
  std::size_t bounces = 8;
};

int run_klein(const GlobalOpts& g, const KleinArgs& a) {
  ws::BarrierConfig cfg;
  cfg.kin = base_kinematics(g);
  cfg.kin.E = a.E;
  cfg.kin.V0 = a.V0;
  cfg.kin.p2 = a.p2;
  cfg.kin.p3 = a.p3;
  cfg.L = a.L;

  std::string err;
  std::optional<std::string> regime;
  ws::KleinReport rep;
  bool ok = false;
  try {
    regime = ws::to_string(ws::classify_regime(cfg.kin));
    rep = ws::klein_report(cfg, a.bounces);
    ok = true;
  } catch (const ws::error& e) {
    err = e.what();
  }

  auto target = open_output(g);
  auto writer = ws::io::make_writer(parse_format(g), *target.os);
  PlotTap tap(*writer, !g.plot.empty(), "bounce",
              {"per_bounce_growth", "hole_count_proxy"});

  const std::size_t count = ok ? rep.per_bounce_growth.size() : 1;
  ws::io::run_ordered(
      count, g.threads,
      [&](std::size_t i) {
        ws::io::Record rec;
        prelude(rec, "klein-report", (std::int64_t)i, g);
        rec.add("E", cfg.kin.E);
        rec.add("V0", cfg.kin.V0);
        rec.add("p2", cfg.kin.p2);
        rec.add("p3", cfg.kin.p3);
        rec.add("L", cfg.L);
        if (regime)
          rec.add("regime", *regime);
        else
          rec.add_null("regime");
        rec.add("bounce", (std::int64_t)i);
        add_opt(rec, "loop_abs", ok ? OptD(rep.loop_magnitude) : OptD());
        add_opt(rec, "bounce_period", ok ? OptD(rep.bounce_period) : OptD());
        add_opt(rec, "per_bounce_growth", ok ? OptD(rep.per_bounce_growth[i]) : OptD());
        add_opt(rec, "hole_count_proxy", ok ? OptD(rep.hole_count_proxy[i]) : OptD());
        add_error(rec, err);
        return rec;
      },
      tap);

  write_plot_file(g, tap, "Klein-zone growth per bounce", "bounce", "magnitude");
  return 0;
}

// ---------------------------------------------------------------------------
// packet

struct PacketArgs {
  double E0 = 2.0, sigma_E = 0.015, p2 = 0.9, p3 = 0.0, V0 = 1.0;
  double L = 0.0;             // > 0: explicit barrier width
  double L_over_width = 0.0;  // > 0: width relative to the packet
  std::vector<double> times;  // empty: evolve to the automatic end time
  std::string mode = "full";
  std::size_t terms = 4;
  double window_k = 5.0;
  bool frame = false;
  bool humps = false;
  std::vector<double> crossover;  // list of L / packet-width ratios
  double x0 = std::numeric_limits<double>::quiet_NaN();
  double x_min = std::numeric_limits<double>::quiet_NaN();
  double x_max = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_x = 0, n_E = 0;
};

struct PacketSetup {
  Kinematics pattern;
  ws::WavePacketSpec base;
  double width = 0.0;
};

PacketSetup packet_setup(const GlobalOpts& g, const PacketArgs& a) {
  PacketSetup s;
  s.pattern = base_kinematics(g);
  s.pattern.V0 = a.V0;
  s.base.E0 = a.E0;
  s.base.sigma_E = a.sigma_E;
  s.base.p2 = a.p2;
  s.base.p3 = a.p3;
  s.base.window_k = a.window_k;
  s.base.series_terms = a.terms;
  s.width = ws::packet_width(s.base, s.pattern);
  return s;
}

void apply_grid_overrides(const PacketArgs& a, ws::WavePacketSpec& spec) {
  if (!std::isnan(a.x0)) spec.x0 = a.x0;
  if (!std::isnan(a.x_min)) spec.x_min = a.x_min;
  if (!std::isnan(a.x_max)) spec.x_max = a.x_max;
  if (a.n_x) spec.n_x = a.n_x;
  if (a.n_E) spec.n_E = a.n_E;
}

int run_packet_crossover(const GlobalOpts& g, const PacketArgs& a, const PacketSetup& s) {
  auto target = open_output(g);
  auto writer = ws::io::make_writer(parse_format(g), *target.os);
  PlotTap tap(*writer, !g.plot.empty(), "l_over_width",
              {"p_transmitted", "coherent_ref", "incoherent_ref"});

  const ws::EvolveMode mode =
      a.mode == "per-term" ? ws::EvolveMode::per_term : ws::EvolveMode::full;
  const Kinematics k0 =
      ws::detail::at_energy(s.pattern, s.base.E0, s.base.p2, s.base.p3);

  ws::io::run_ordered(
      a.crossover.size(), g.threads,
      [&](std::size_t i) {
        ws::io::Record rec;
        prelude(rec, "packet", (std::int64_t)i, g);
        rec.add("E0", s.base.E0);
        rec.add("sigma_E", s.base.sigma_E);
        rec.add("p2", s.base.p2);
        rec.add("p3", s.base.p3);
        rec.add("V0", s.pattern.V0);
        rec.add("width", s.width);
        const double ratio = a.crossover[i];
        std::string err;
        OptD L, p_trans, coh, inc, t_end;
        std::optional<std::int64_t> ne, nx;
        try {
          if (!(ratio > 0.0)) throw ws::domain_error("crossover ratios must be > 0");
          L = ratio * s.width;
          const ws::AutoGeometry geo = ws::auto_geometry(s.base, s.pattern, *L);
          ws::WavePacketSpec spec = geo.spec;
          const ws::BarrierConfig cfg{k0, *L};
          const ws::PacketState st = ws::evolve(spec, cfg, geo.t_end, mode);
          p_trans = st.p_transmitted;
          coh = std::norm(ws::closed_form(cfg).t);
          inc = ws::incoherent_probabilities(k0).transmission;
          t_end = geo.t_end;
          ne = (std::int64_t)spec.n_E;
          nx = (std::int64_t)spec.n_x;
        } catch (const ws::error& e) {
          err = e.what();
        }
        rec.add("l_over_width", ratio);
        add_opt(rec, "L", L);
        add_opt(rec, "time", t_end);
        if (ne) rec.add("n_E", *ne); else rec.add_null("n_E");
        if (nx) rec.add("n_x", *nx); else rec.add_null("n_x");
        add_opt(rec, "p_transmitted", p_trans);
        add_opt(rec, "coherent_ref", coh);
        add_opt(rec, "incoherent_ref", inc);
        add_error(rec, err);
        return rec;
      },
      tap);

  write_plot_file(g, tap, "coherence crossover", "L / packet width", "probability");
  return 0;
}

int run_packet(const GlobalOpts& g, const PacketArgs& a) {
  const PacketSetup s = packet_setup(g, a);
  if (!a.crossover.empty()) return run_packet_crossover(g, a, s);

  const double L =
      a.L > 0.0 ? a.L : (a.L_over_width > 0.0 ? a.L_over_width : 10.0) * s.width;
  const ws::EvolveMode mode =
      a.mode == "per-term" ? ws::EvolveMode::per_term : ws::EvolveMode::full;
  const Kinematics k0 =
      ws::detail::at_energy(s.pattern, s.base.E0, s.base.p2, s.base.p3);
  const ws::BarrierConfig cfg{k0, L};

  ws::AutoGeometry geo = ws::auto_geometry(s.base, s.pattern, L);
  apply_grid_overrides(a, geo.spec);
  const std::vector<double> times =
      a.times.empty() ? std::vector<double>{geo.t_end} : a.times;

  auto target = open_output(g);
  auto writer = ws::io::make_writer(parse_format(g), *target.os);

  auto add_inputs = [&](ws::io::Record& rec) {
    rec.add("E0", s.base.E0);
    rec.add("sigma_E", s.base.sigma_E);
    rec.add("p2", s.base.p2);
    rec.add("p3", s.base.p3);
    rec.add("V0", s.pattern.V0);
    rec.add("L", L);
    rec.add("width", s.width);
    rec.add("l_over_width", L / s.width);
    rec.add("mode", a.mode);
  };

  if (a.frame) {
    // Columnar snapshots: one row per grid point per requested time.
    std::vector<ws::PacketState> states;
    std::string err;
    for (const double t : times) {
      try {
        states.push_back(ws::evolve(geo.spec, cfg, t, mode));
      } catch (const ws::error& e) {
        err = e.what();
        break;
      }
    }
    PlotTap tap(*writer, !g.plot.empty(), "x", {"density"}, "time");
    const std::size_t per = err.empty() ? geo.spec.n_x : 1;
    const std::size_t count = err.empty() ? states.size() * per : 1;
    ws::io::run_ordered(
        count, g.threads,
        [&](std::size_t i) {
          ws::io::Record rec;
          prelude(rec, "packet", (std::int64_t)i, g);
          add_inputs(rec);
          if (!err.empty()) {
            rec.add_null("time");
            rec.add_null("x");
            rec.add_null("psi1_abs2");
            rec.add_null("psi2_abs2");
            rec.add_null("density");
            rec.add_null("region");
            add_error(rec, err);
            return rec;
          }
          const ws::PacketState& st = states[i / per];
          const std::size_t j = i % per;
          const double x = st.x[j];
          const double d1 = std::norm(st.psi_up[j]);
          const double d2 = std::norm(st.psi_down[j]);
          rec.add("time", st.time);
          rec.add("x", x);
          rec.add("psi1_abs2", d1);
          rec.add("psi2_abs2", d2);
          rec.add("density", d1 + d2);
          rec.add("region", std::string(x < 0.0      ? "reflected"
                                        : x <= st.L ? "barrier"
                                                    : "transmitted"));
          add_error(rec, "");
          return rec;
        },
        tap);
    write_plot_file(g, tap, "packet density", "x", "|psi|^2");
    return 0;
  }

  if (a.humps) {
    // Transmitted humps (right-to-left) at the last requested time.
    std::string err;
    std::vector<ws::Hump> humps;
    double loop2 = 0.0, t_used = times.back();
    try {
      const ws::PacketState st = ws::evolve(geo.spec, cfg, t_used, mode);
      humps = ws::transmitted_humps(st);
      loop2 = std::norm(ws::loop_factor(cfg));
      if (humps.empty()) err = "no transmitted humps above threshold";
    } catch (const ws::error& e) {
      err = e.what();
    }
    PlotTap tap(*writer, false, "", {});
    const std::size_t count = humps.empty() ? 1 : humps.size();
    ws::io::run_ordered(
        count, g.threads,
        [&](std::size_t i) {
          ws::io::Record rec;
          prelude(rec, "packet", (std::int64_t)i, g);
          add_inputs(rec);
          rec.add("time", t_used);
          const bool ok = i < humps.size();
          if (ok)
            rec.add("hump", (std::int64_t)i);
          else
            rec.add_null("hump");
          add_opt(rec, "x_left", ok ? OptD(humps[i].x_left) : OptD());
          add_opt(rec, "x_right", ok ? OptD(humps[i].x_right) : OptD());
          add_opt(rec, "x_peak", ok ? OptD(humps[i].x_peak) : OptD());
          add_opt(rec, "norm", ok ? OptD(humps[i].norm) : OptD());
          add_opt(rec, "ratio_to_prev",
                  ok && i > 0 && humps[i - 1].norm > 0.0
                      ? OptD(humps[i].norm / humps[i - 1].norm)
                      : OptD());
          add_opt(rec, "loop_abs2", humps.empty() ? OptD() : OptD(loop2));
          add_error(rec, err);
          return rec;
        },
        tap);
    return 0;
  }

  // Default: one summary row per requested time.
  PlotTap tap(*writer, false, "", {});
  ws::io::run_ordered(
      times.size(), g.threads,
      [&](std::size_t i) {
        ws::io::Record rec;
        prelude(rec, "packet", (std::int64_t)i, g);
        add_inputs(rec);
        std::string err;
        OptD p_ref, p_bar, p_trans, norm, coh, inc;
        std::optional<std::int64_t> ne, nx;
        try {
          const ws::PacketState st = ws::evolve(geo.spec, cfg, times[i], mode);
          p_ref = st.p_reflected;
          p_bar = st.p_barrier;
          p_trans = st.p_transmitted;
          norm = st.total_norm();
          coh = std::norm(ws::closed_form(cfg).t);
          inc = ws::incoherent_probabilities(k0).transmission;
          ne = (std::int64_t)geo.spec.n_E;
          nx = (std::int64_t)geo.spec.n_x;
        } catch (const ws::error& e) {
          err = e.what();
        }
        rec.add("time", times[i]);
        if (ne) rec.add("n_E", *ne); else rec.add_null("n_E");
        if (nx) rec.add("n_x", *nx); else rec.add_null("n_x");
        add_opt(rec, "p_reflected", p_ref);
        add_opt(rec, "p_barrier", p_bar);
        add_opt(rec, "p_transmitted", p_trans);
        add_opt(rec, "total_norm", norm);
        add_opt(rec, "coherent_ref", coh);
        add_opt(rec, "incoherent_ref", inc);
        add_error(rec, err);
        return rec;
      },
      tap);
  if (!g.plot.empty())
    std::cerr << "note: --plot applies to packet --frame and --crossover only\n";
  return 0;
}

// ---------------------------------------------------------------------------
// graphene (point / sweep) and graphene map

struct GrapheneArgs {
  double E = 3.0, V0 = 1.0, phi = 0.0, L = 1.0;
  bool degrees = false;
  Sweep sweep;
};

struct GrapheneMapArgs {
  double E = 3.0, V0 = 1.0, L = 1.0;
  double phi_from = -1.5, phi_to = 1.5;
  std::size_t phi_steps = 61;
  double e_from = 0.0, e_to = 0.0;
  std::size_t e_steps = 0;
  double l_from = 0.0, l_to = 0.0;
  std::size_t l_steps = 0;
  bool degrees = false;
};

constexpr double deg2rad = 3.14159265358979323846 / 180.0;

void graphene_row(ws::io::Record& rec, const ws::GrapheneConfig& gc) {
  std::string err;
  std::optional<std::string> regime;
  OptD theta, t2;
  std::optional<bool> formal;
  try {
    regime = ws::to_string(ws::classify_regime(ws::to_kinematics(gc)));
    const ws::GrapheneTransmission tr = ws::transmission_graphene(gc);
    theta = tr.theta;
    t2 = tr.t2;
    formal = tr.formal;
  } catch (const ws::error& e) {
    err = e.what();
  }
  if (regime)
    rec.add("regime", *regime);
  else
    rec.add_null("regime");
  add_opt(rec, "theta", theta);
  add_opt(rec, "t2", t2);
  add_opt_bool(rec, "formal", formal);
  rec.add("valid", t2.has_value());
  add_error(rec, err);
}

int run_graphene(const GlobalOpts& g, const GrapheneArgs& a) {
  auto target = open_output(g);
  auto writer = ws::io::make_writer(parse_format(g), *target.os);
  const std::string xkey = a.sweep.param.empty() ? "phi" : a.sweep.param;
  PlotTap tap(*writer, !g.plot.empty(), xkey, {"t2"});

  const double ang = a.degrees ? deg2rad : 1.0;
  ws::io::run_ordered(
      a.sweep.count(), g.threads,
      [&](std::size_t i) {
        ws::GrapheneConfig gc;
        gc.E = a.E;
        gc.V0 = a.V0;
        gc.phi = a.phi * ang;
        gc.L = a.L;
        gc.v_F = 1.0;
        gc.hbar = base_kinematics(g).hbar;
        if (!a.sweep.param.empty()) {
          const double v = a.sweep.value(i);
          if (a.sweep.param == "E") gc.E = v;
          else if (a.sweep.param == "V0") gc.V0 = v;
          else if (a.sweep.param == "L") gc.L = v;
          else gc.phi = v * ang;
        }
        ws::io::Record rec;
        prelude(rec, "graphene", (std::int64_t)i, g);
        rec.add("E", gc.E);
        rec.add("V0", gc.V0);
        rec.add("phi", gc.phi);
        rec.add("L", gc.L);
        graphene_row(rec, gc);
        return rec;
      },
      tap);

  write_plot_file(g, tap, "graphene transmission", xkey, "|t|^2");
  return 0;
}

int run_graphene_map(const GlobalOpts& g, const GrapheneMapArgs& a) {
  if (a.e_steps > 0 && a.l_steps > 0)
    throw ws::config_error("graphene map: choose an energy scan or a width scan, not both");

  const double ang = a.degrees ? deg2rad : 1.0;
  Sweep phis{"phi", a.phi_from * ang, a.phi_to * ang, a.phi_steps};
  const bool width_axis = a.l_steps > 0;
  Sweep scan;
  if (a.e_steps > 0)
    scan = Sweep{"E", a.e_from, a.e_to, a.e_steps};
  else if (width_axis)
    scan = Sweep{"L", a.l_from, a.l_to, a.l_steps};
  else
    scan = Sweep{"E", a.E, a.E, 1};

  auto target = open_output(g);
  auto writer = ws::io::make_writer(parse_format(g), *target.os);
  PlotTap tap(*writer, !g.plot.empty(), "phi", {"t2"}, width_axis ? "L" : "E");

  const std::size_t n_phi = phis.count();
  ws::io::run_ordered(
      scan.count() * n_phi, g.threads,
      [&](std::size_t idx) {
        const std::size_t row = idx / n_phi, col = idx % n_phi;
        ws::GrapheneConfig gc;
        gc.E = width_axis ? a.E : scan.value(row);
        gc.V0 = a.V0;
        gc.phi = phis.value(col);
        gc.L = width_axis ? scan.value(row) : a.L;
        gc.v_F = 1.0;
        gc.hbar = base_kinematics(g).hbar;
        ws::io::Record rec;
        prelude(rec, "graphene", (std::int64_t)idx, g);
        rec.add("axis", std::string(width_axis ? "width" : "energy"));
        rec.add("E", gc.E);
        rec.add("V0", gc.V0);
        rec.add("phi", gc.phi);
        rec.add("L", gc.L);
        graphene_row(rec, gc);
        return rec;
      },
      tap);

  write_plot_file(g, tap, "graphene angular transmission", "phi", "|t|^2");
  return 0;
}

}  // namespace wtool

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  using namespace wtool;

  CLI::App app{
      "weylscat: chiral fermion scattering off sharp potential steps and "
      "rectangular barriers"};
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "read options from a key=value file (flags win)");
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--units", g.units, "unit system: natural (hbar=c=1) or device (eV/nm/fs)")
      ->transform(CLI::IsMember({"natural", "device"}));
  app.add_option("--format", g.format, "record format")
      ->transform(CLI::IsMember({"csv", "json", "jsonl"}));
  app.add_option("--out", g.out, "output path (default: stdout)");
  app.add_option("--plot", g.plot, "also write an SVG plot to this path");
  app.add_option("--threads", g.threads, "worker threads, 0 = hardware count");

  StepArgs step_a;
  auto* step_cmd = app.add_subcommand("step", "amplitudes at a single sharp step");
  step_cmd->add_option("--E", step_a.E, "incoming energy");
  step_cmd->add_option("--V0", step_a.V0, "step height");
  step_cmd->add_option("--p2", step_a.p2, "transverse momentum along y");
  step_cmd->add_option("--p3", step_a.p3, "transverse momentum along z");
  add_sweep_options(step_cmd, step_a.sweep, {"E", "V0", "p2", "p3"});

  BarrierArgs bar_a;
  auto* bar_cmd =
      app.add_subcommand("barrier", "total amplitudes for a rectangular barrier");
  bar_cmd->add_option("--E", bar_a.E, "incoming energy");
  bar_cmd->add_option("--V0", bar_a.V0, "barrier height");
  bar_cmd->add_option("--p2", bar_a.p2, "transverse momentum along y");
  bar_cmd->add_option("--p3", bar_a.p3, "transverse momentum along z");
  bar_cmd->add_option("--L", bar_a.L, "barrier width");
  bar_cmd->add_option("--method", bar_a.method, "evaluation route")
      ->transform(CLI::IsMember({"closed", "series", "matrix", "all"}));
  bar_cmd->add_flag("--formal", bar_a.formal,
                    "evaluate the closed form below the barrier anyway");
  bar_cmd->add_option("--max-terms", bar_a.max_terms, "series term cap");
  bar_cmd->add_option("--tol", bar_a.tol, "series stopping tolerance");
  add_sweep_options(bar_cmd, bar_a.sweep, {"E", "V0", "L", "p2", "p3"});

  SeriesArgs ser_a;
  auto* ser_cmd = app.add_subcommand(
      "series", "multiple-reflection expansion, one record per contribution");
  ser_cmd->add_option("--E", ser_a.E, "incoming energy");
  ser_cmd->add_option("--V0", ser_a.V0, "barrier height");
  ser_cmd->add_option("--p2", ser_a.p2, "transverse momentum along y");
  ser_cmd->add_option("--p3", ser_a.p3, "transverse momentum along z");
  ser_cmd->add_option("--L", ser_a.L, "barrier width");
  ser_cmd->add_option("--max-terms", ser_a.max_terms, "series term cap");
  ser_cmd->add_option("--tol", ser_a.tol, "series stopping tolerance");

  KleinArgs kl_a;
  auto* kl_cmd = app.add_subcommand(
      "klein-report", "divergence diagnosis below the barrier, per bounce");
  kl_cmd->add_option("--E", kl_a.E, "incoming energy");
  kl_cmd->add_option("--V0", kl_a.V0, "barrier height");
  kl_cmd->add_option("--p2", kl_a.p2, "transverse momentum along y");
  kl_cmd->add_option("--p3", kl_a.p3, "transverse momentum along z");
  kl_cmd->add_option("--L", kl_a.L, "barrier width");
  kl_cmd->add_option("--bounces", kl_a.bounces, "round trips to tabulate");

  PacketArgs pk_a;
  auto* pk_cmd =
      app.add_subcommand("packet", "wave-packet evolution through the barrier");
  pk_cmd->add_option("--E0", pk_a.E0, "packet center energy");
  pk_cmd->add_option("--sigma-E", pk_a.sigma_E, "spectral width");
  pk_cmd->add_option("--p2", pk_a.p2, "transverse momentum along y");
  pk_cmd->add_option("--p3", pk_a.p3, "transverse momentum along z");
  pk_cmd->add_option("--V0", pk_a.V0, "barrier height");
  auto* pk_L = pk_cmd->add_option("--L", pk_a.L, "barrier width");
  auto* pk_rel = pk_cmd->add_option("--L-over-width", pk_a.L_over_width,
                                    "barrier width in units of the packet width");
  pk_L->excludes(pk_rel);
  pk_cmd->add_option("--time", pk_a.times,
                     "snapshot times (repeatable; default: automatic end time)");
  pk_cmd->add_option("--mode", pk_a.mode, "evolution mode")
      ->transform(CLI::IsMember({"full", "per-term"}));
  pk_cmd->add_option("--terms", pk_a.terms, "loop passes kept in per-term mode");
  pk_cmd->add_option("--window-k", pk_a.window_k, "spectral window half-width in sigmas");
  auto* pk_frame =
      pk_cmd->add_flag("--frame", pk_a.frame, "emit the |psi|^2 grid instead of the summary");
  auto* pk_humps = pk_cmd->add_flag("--humps", pk_a.humps,
                                    "emit transmitted humps instead of the summary");
  auto* pk_cross = pk_cmd->add_option(
      "--crossover", pk_a.crossover,
      "evolve once per L/width ratio and report the transmitted probability");
  pk_frame->excludes(pk_humps)->excludes(pk_cross);
  pk_humps->excludes(pk_cross);
  pk_cmd->add_option("--x0", pk_a.x0, "launch center (< 0)")->default_str("auto");
  pk_cmd->add_option("--x-min", pk_a.x_min, "grid start")->default_str("auto");
  pk_cmd->add_option("--x-max", pk_a.x_max, "grid end")->default_str("auto");
  pk_cmd->add_option("--n-x", pk_a.n_x, "grid points, 0 = auto");
  pk_cmd->add_option("--n-E", pk_a.n_E, "spectral samples, 0 = auto");

  GrapheneArgs gr_a;
  auto* gr_cmd = app.add_subcommand(
      "graphene", "sheet transmission through a rectangular barrier");
  gr_cmd->require_subcommand(0, 1);
  gr_cmd->add_option("--E", gr_a.E, "carrier energy");
  gr_cmd->add_option("--V0", gr_a.V0, "barrier height");
  gr_cmd->add_option("--phi", gr_a.phi, "incidence angle");
  gr_cmd->add_option("--L", gr_a.L, "barrier width");
  gr_cmd->add_flag("--degrees", gr_a.degrees, "angles given in degrees");
  add_sweep_options(gr_cmd, gr_a.sweep, {"E", "V0", "L", "phi"});

  GrapheneMapArgs gm_a;
  auto* gm_cmd = gr_cmd->add_subcommand("map", "angular transmission map");
  gm_cmd->add_option("--E", gm_a.E, "carrier energy (fixed unless --E-steps)");
  gm_cmd->add_option("--V0", gm_a.V0, "barrier height");
  gm_cmd->add_option("--L", gm_a.L, "barrier width (fixed unless --L-steps)");
  gm_cmd->add_option("--phi-from", gm_a.phi_from, "first incidence angle");
  gm_cmd->add_option("--phi-to", gm_a.phi_to, "last incidence angle");
  gm_cmd->add_option("--phi-steps", gm_a.phi_steps, "angle count")
      ->check(CLI::PositiveNumber);
  gm_cmd->add_option("--E-from", gm_a.e_from, "energy scan start");
  gm_cmd->add_option("--E-to", gm_a.e_to, "energy scan end");
  gm_cmd->add_option("--E-steps", gm_a.e_steps, "energy scan count, 0 = fixed E");
  gm_cmd->add_option("--L-from", gm_a.l_from, "width scan start");
  gm_cmd->add_option("--L-to", gm_a.l_to, "width scan end");
  gm_cmd->add_option("--L-steps", gm_a.l_steps, "width scan count, 0 = fixed L");
  gm_cmd->add_flag("--degrees", gm_a.degrees, "angles given in degrees");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*step_cmd) return run_step(g, step_a);
    if (*bar_cmd) return run_barrier(g, bar_a);
    if (*ser_cmd) return run_series(g, ser_a);
    if (*kl_cmd) return run_klein(g, kl_a);
    if (*pk_cmd) return run_packet(g, pk_a);
    if (*gr_cmd) {
      if (*gm_cmd) return run_graphene_map(g, gm_a);
      return run_graphene(g, gr_a);
    }
  } catch (const weylscat::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
