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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "common/helpers.hpp"

using namespace weylscat;

namespace {

void check_cplx(cplx got, double re, double im, double tol = 1e-13) {
  CHECK(std::abs(got.real() - re) <= tol * (1.0 + std::abs(re)));
  CHECK(std::abs(got.imag() - im) <= tol * (1.0 + std::abs(im)));
}

const BarrierConfig bd{{3.0, 1.0, 1.0, 0.0, 1.0, 1.0}, 1.0};  // diffusion
const BarrierConfig bk{{1.0, 3.0, 0.5, 0.0, 1.0, 1.0}, 1.0};  // Klein

}  // namespace

TEST_CASE("matrix solve, fixed diffusion point") {
  const InteriorSolution sol = continuity_solution(bd);
  check_cplx(sol.r, 0.094323691889168809, -0.17352846666476318);
  check_cplx(sol.A, 1.0234518007875835, -0.097608646530907797);
  check_cplx(sol.B, 0.070871891101585524, -0.075919820133855495);
  check_cplx(sol.t, 0.44502800771136336, -0.87346493046820606);
  CHECK(sol.condition > 1.0);
  CHECK(sol.condition < 1e6);
  CHECK(wtest::barrier_residual(bd, sol.r, sol.A, sol.B, sol.t) < 1e-13);
}

TEST_CASE("matrix solve, fixed Klein point: bounded reflection") {
  const BarrierResult res = matrix_solve(bk);
  check_cplx(res.r, -0.15585527721705641, 0.62183309258063058);
  check_cplx(res.t, -0.6986529045308385, -0.31767413575207354);
  CHECK(std::abs(res.r) == Catch::Approx(0.64106728388274237).epsilon(1e-13));
  CHECK(std::abs(res.r) < 1.0);
}

TEST_CASE("closed form matches the matrix route exactly, both zones") {
  const BarrierResult cd = closed_form(bd);
  const BarrierResult md = matrix_solve(bd);
  CHECK(std::abs(cd.t - md.t) < 1e-14);
  CHECK(std::abs(cd.r - md.r) < 1e-14);
  CHECK_FALSE(cd.formal);

  const BarrierResult ck = closed_form(bk, KleinPolicy::formal);
  const BarrierResult mk = matrix_solve(bk);
  CHECK(ck.formal);
  CHECK(std::abs(ck.t - mk.t) < 1e-14);
  CHECK(std::abs(ck.r - mk.r) < 1e-14);

  CHECK_THROWS_AS(closed_form(bk), regime_error);
}

TEST_CASE("series expansion above the barrier") {
  const SeriesExpansion ex = series_expand(bd);
  CHECK(ex.convergent);
  CHECK(std::abs(ex.loop) == Catch::Approx(0.01020514433643804).epsilon(1e-13));
  check_cplx(ex.loop, -0.009678999708478424, -0.00323449154749367);
  const BarrierResult md = matrix_solve(bd);
  CHECK(std::abs(ex.summed_t() - md.t) < 1e-13);
  CHECK(std::abs(ex.summed_r() - md.r) < 1e-13);
  // geometric decay of the terms
  for (std::size_t s = 1; s < ex.terms_t.size(); ++s)
    CHECK(std::abs(ex.terms_t[s]) ==
          Catch::Approx(std::abs(ex.terms_t[s - 1]) * std::abs(ex.loop)).epsilon(1e-12));
}

TEST_CASE("series interior coefficients match the matrix interior") {
  wtest::Sampler gen(424242);
  for (int i = 0; i < 200; ++i) {
    const BarrierConfig cfg{gen.diffusion(), gen.uniform(0.2, 4.0)};
    const AlphaFactor af = alpha_factor(cfg.kin);
    const StepResult s1 = step1(af);
    const StepResult s2 = step2(cfg.kin, cfg.L, af);
    const StepResult s3 = step3(af);
    const cplx ladder = 1.0 / (1.0 - s2.r * s3.r);
    const InteriorSolution sol = continuity_solution(cfg);
    CHECK(std::abs(s1.t * ladder - sol.A) <= 1e-12 * (1.0 + std::abs(sol.A)));
    CHECK(std::abs(s1.t * s2.r * ladder - sol.B) <= 1e-12 * (1.0 + std::abs(sol.B)));
  }
}

TEST_CASE("series diverges below the barrier") {
  const SeriesExpansion ex = series_expand(bk, 64);
  CHECK_FALSE(ex.convergent);
  CHECK(std::abs(ex.loop) > 1.0);
  CHECK(std::abs(ex.loop) == Catch::Approx(6.8541019662496847).epsilon(1e-13));
  CHECK(ex.truncation_index == 64);
  CHECK_THROWS_AS(ex.summed_t(), series_divergence_error);
  CHECK_THROWS_AS(ex.summed_r(), series_divergence_error);
  // terms grow monotonically
  for (std::size_t s = 1; s < ex.terms_t.size(); ++s)
    CHECK(std::abs(ex.terms_t[s]) > std::abs(ex.terms_t[s - 1]));
}

TEST_CASE("flat potential: single term, full transmission") {
  const SeriesExpansion ex = series_expand({{2.0, 0.0, 0.3, 0.0, 1.0, 1.0}, 1.5});
  CHECK(ex.convergent);
  CHECK(ex.truncation_index == 1);
  CHECK(ex.terms_t.size() == 1);
  CHECK(std::abs(ex.summed_t() - 1.0) < 1e-14);
  CHECK(std::abs(ex.summed_r()) < 1e-14);
}

TEST_CASE("loop factor magnitude equals the step reflection probability") {
  wtest::Sampler gen(8080);
  for (int i = 0; i < 300; ++i) {
    const Kinematics k = (i % 2 ? gen.diffusion() : gen.klein());
    const BarrierConfig cfg{k, gen.uniform(0.1, 5.0)};
    const double srp = step_reflection_probability(k);
    CHECK(std::abs(std::abs(loop_factor(cfg)) - srp) <= 1e-12 * (1.0 + srp));
  }
}

TEST_CASE("head-on Klein: full transmission without the series") {
  // alpha = -1 exactly; the two-step decomposition is singular but the
  // total amplitudes are regular: no backscattering for head-on chiral waves.
  const BarrierConfig cfg{{1.0, 3.0, 0.0, 0.0, 1.0, 1.0}, 0.7};
  CHECK_THROWS_AS(loop_factor(cfg), singularity_error);
  const BarrierResult m = matrix_solve(cfg);
  CHECK(std::abs(m.r) < 1e-12);
  CHECK(std::abs(std::abs(m.t) - 1.0) < 1e-12);
  const BarrierResult c = closed_form(cfg, KleinPolicy::formal);
  CHECK(std::abs(c.t - m.t) < 1e-12);
}

TEST_CASE("barrier rejects the evanescent zone and bad widths") {
  CHECK_THROWS_AS(closed_form({{1.0, 1.0, 0.5, 0.0, 1.0, 1.0}, 1.0}), regime_error);
  CHECK_THROWS_AS(matrix_solve({{1.0, 1.0, 0.5, 0.0, 1.0, 1.0}, 1.0}), regime_error);
  CHECK_THROWS_AS(series_expand({{1.0, 1.0, 0.5, 0.0, 1.0, 1.0}, 1.0}), regime_error);
  CHECK_THROWS_AS(closed_form({{3.0, 1.0, 1.0, 0.0, 1.0, 1.0}, -1.0}), domain_error);
  CHECK_THROWS_AS(closed_form({{3.0, 1.0, 1.0, 0.0, 1.0, 1.0}, 0.0}), domain_error);
}

TEST_CASE("incoherent probabilities") {
  const IncoherentSplit split = incoherent_probabilities(bd.kin);
  CHECK(split.transmission == Catch::Approx(0.97979589711327131).epsilon(1e-14));
  CHECK(split.reflection == Catch::Approx(0.020204102886728754).epsilon(1e-14));
  CHECK(split.transmission + split.reflection == Catch::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(incoherent_probabilities(bk.kin), regime_error);
  wtest::Sampler gen(606);
  for (int i = 0; i < 200; ++i) {
    const IncoherentSplit s = incoherent_probabilities(gen.diffusion());
    CHECK(s.transmission > 0.0);
    CHECK(s.transmission < 1.0);
    CHECK(std::abs(s.transmission + s.reflection - 1.0) < 1e-14);
  }
}

TEST_CASE("resonance energies, fixed family") {
  const Kinematics pattern{1.0, 1.0, 1.0, 0.0, 1.0, 1.0};
  const ResonanceScan scan = find_resonances(pattern, 1.0, 2.1, 11.0);
  REQUIRE(scan.resonances.size() == 3);
  CHECK_FALSE(scan.head_on_family);
  CHECK(scan.resonances[0].n == 1);
  CHECK(scan.resonances[0].energy == Catch::Approx(4.2969083094756151).epsilon(1e-10));
  CHECK(scan.resonances[1].energy == Catch::Approx(7.3622651315673284).epsilon(1e-10));
  CHECK(scan.resonances[2].energy == Catch::Approx(10.477681130413927).epsilon(1e-10));
  for (const Resonance& res : scan.resonances) {
    Kinematics k = pattern;
    k.E = res.energy;
    CHECK(std::norm(closed_form({k, 1.0}).t) == Catch::Approx(1.0).margin(1e-10));
    CHECK(std::norm(matrix_solve({k, 1.0}).t) == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("head-on family flag and range checks") {
  const Kinematics head{1.0, 2.0, 0.0, 0.0, 1.0, 1.0};
  const ResonanceScan scan = find_resonances(head, 2.0, 2.5, 6.0);
  CHECK(scan.head_on_family);
  CHECK_THROWS_AS(find_resonances(head, 2.0, 1.0, 6.0), regime_error);
  CHECK_THROWS_AS(find_resonances(head, 2.0, 6.0, 3.0), domain_error);
}

TEST_CASE("klein report growth table") {
  const KleinReport rep = klein_report(bk, 8);
  CHECK(rep.loop_magnitude == Catch::Approx(6.8541019662496847).epsilon(1e-13));
  CHECK(rep.bounce_period == Catch::Approx(2.0655911179772892).epsilon(1e-13));
  REQUIRE(rep.per_bounce_growth.size() == 9);
  REQUIRE(rep.hole_count_proxy.size() == 9);
  CHECK(rep.per_bounce_growth[0] == Catch::Approx(5.854101966249684).epsilon(1e-12));
  CHECK(rep.hole_count_proxy[0] == 1.0);
  for (std::size_t s = 1; s < 9; ++s) {
    CHECK(rep.per_bounce_growth[s] > rep.per_bounce_growth[s - 1]);
    CHECK(rep.per_bounce_growth[s] ==
          Catch::Approx(rep.per_bounce_growth[s - 1] * rep.loop_magnitude).epsilon(1e-12));
    CHECK(rep.hole_count_proxy[s] ==
          Catch::Approx(rep.hole_count_proxy[s - 1] +
                        std::pow(rep.loop_magnitude, (double)s)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(klein_report(bd, 4), regime_error);
}

TEST_CASE("unitarity and residuals over random diffusion draws") {
  wtest::Sampler gen(987654);
  for (int i = 0; i < 300; ++i) {
    const BarrierConfig cfg{gen.diffusion(true), gen.uniform(0.1, 6.0)};
    const BarrierResult c = closed_form(cfg);
    const BarrierResult m = matrix_solve(cfg);
    CHECK(std::abs(std::norm(c.t) + std::norm(c.r) - 1.0) < 1e-12);
    CHECK(std::abs(std::norm(m.t) + std::norm(m.r) - 1.0) < 1e-12);
    CHECK(std::abs(c.t - m.t) < 1e-12);
    CHECK(std::abs(c.r - m.r) < 1e-12);
    const InteriorSolution sol = continuity_solution(cfg);
    CHECK(wtest::barrier_residual(cfg, sol.r, sol.A, sol.B, sol.t) < 1e-12);
  }
}

TEST_CASE("Klein dichotomy over random draws") {
  wtest::Sampler gen(13579);
  for (int i = 0; i < 300; ++i) {
    const BarrierConfig cfg{gen.klein(), gen.uniform(0.1, 3.0)};
    CHECK(std::norm(step1(cfg.kin).r) > 1.0);
    CHECK(std::abs(loop_factor(cfg)) > 1.0);
    CHECK_FALSE(series_expand(cfg, 32).convergent);
    const BarrierResult m = matrix_solve(cfg);
    CHECK(std::abs(m.r) < 1.0);
    const InteriorSolution sol = continuity_solution(cfg);
    CHECK(wtest::barrier_residual(cfg, sol.r, sol.A, sol.B, sol.t) < 1e-11);
  }
}
