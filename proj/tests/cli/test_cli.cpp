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
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef WEYLSCAT_CLI_PATH
#error "WEYLSCAT_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string("\"") + WEYLSCAT_CLI_PATH + "\" " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
  const int status = pclose(pipe);
  res.code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return res;
}

std::vector<nlohmann::json> parse_jsonl(const std::string& text) {
  std::vector<nlohmann::json> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(nlohmann::json::parse(line));
  return rows;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("step point in the Klein zone") {
  const RunResult res = run("step --E 1 --V0 3 --p2 0.5 --format jsonl");
  REQUIRE(res.code == 0);
  const auto rows = parse_jsonl(res.out);
  REQUIRE(rows.size() == 1);
  const auto& r = rows[0];
  CHECK(r.at("tool") == "step");
  CHECK(r.at("regime") == "klein");
  CHECK(r.at("error").is_null());
  CHECK(std::abs(r.at("r0_abs2").get<double>() - 6.8541019662496847) < 1e-12);
  CHECK(std::abs(r.at("alpha_re").get<double>() - (-1.1180339887498951)) < 1e-13);
  CHECK(std::abs(r.at("alpha_im").get<double>() - (-0.8660254037844388)) < 1e-13);
  CHECK(std::abs(r.at("r0_re").get<double>() - (-1.3090169943749479)) < 1e-13);
  CHECK(std::abs(r.at("r0_im").get<double>() - 2.267283942228512) < 1e-13);
}

TEST_CASE("sweep bytes do not depend on the thread count or the run") {
  const std::string cmd = "step --sweep E --from 0.5 --to 6 --steps 200 --V0 1 --p2 1";
  const RunResult a = run(cmd + " --threads 1");
  const RunResult b = run(cmd + " --threads 4");
  const RunResult c = run(cmd + " --threads 1");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(count_lines(a.out) == 201);  // header + one row per grid point
  // the sweep crosses the evanescent wedge and the open zone
  CHECK(a.out.find("evanescent") != std::string::npos);
  CHECK(a.out.find("diffusion") != std::string::npos);
}

TEST_CASE("evanescent step rows carry the certainty |r0|^2 = 1") {
  const RunResult res =
      run("step --sweep E --from 1.05 --to 1.9 --steps 7 --V0 1 --p2 1 --format jsonl");
  REQUIRE(res.code == 0);
  const auto rows = parse_jsonl(res.out);
  REQUIRE(rows.size() == 7);
  for (const auto& r : rows) {
    REQUIRE(r.at("regime") == "evanescent");
    CHECK(r.at("r0_re").is_null());  // no propagating transmitted channel
    CHECK(r.at("t0_re").is_null());
    CHECK(r.at("r0_abs2").get<double>() == 1.0);
    CHECK(r.at("error").is_null());
  }
}

TEST_CASE("barrier methods agree above the barrier") {
  const RunResult res = run("barrier --E 3 --V0 1 --p2 1 --L 1 --format jsonl");
  REQUIRE(res.code == 0);
  const auto rows = parse_jsonl(res.out);
  REQUIRE(rows.size() == 1);
  const auto& r = rows[0];
  CHECK(r.at("regime") == "diffusion");
  CHECK(r.at("series_convergent") == true);
  CHECK(r.at("delta_max").get<double>() < 1e-10);
  CHECK(std::abs(r.at("closed_t_re").get<double>() - 0.44502800771136336) < 1e-12);
  CHECK(std::abs(r.at("closed_t_im").get<double>() - (-0.87346493046820606)) < 1e-12);
  CHECK(std::abs(r.at("closed_T").get<double>() + r.at("closed_R").get<double>() - 1.0) <
        1e-12);
  CHECK(r.at("matrix_condition").get<double>() < 1e6);
  CHECK(std::abs(r.at("loop_abs").get<double>() - 0.01020514433643804) < 1e-13);
}

TEST_CASE("barrier below the barrier: divergent series, formal closed form") {
  const RunResult bare = run("barrier --E 1 --V0 3 --p2 0.5 --L 1 --format jsonl");
  REQUIRE(bare.code == 0);
  const auto rows = parse_jsonl(bare.out);
  REQUIRE(rows.size() == 1);
  const auto& r = rows[0];
  CHECK(r.at("regime") == "klein");
  CHECK(std::abs(r.at("loop_abs").get<double>() - 6.8541019662496847) < 1e-12);
  CHECK(r.at("series_convergent") == false);
  CHECK(r.at("series_t_re").is_null());
  CHECK(r.at("closed_t_re").is_null());  // gated without --formal
  CHECK(r.at("error").is_string());
  const double mr = std::hypot(r.at("matrix_r_re").get<double>(),
                               r.at("matrix_r_im").get<double>());
  CHECK(std::abs(mr - 0.64106728388274237) < 1e-12);
  CHECK(mr < 1.0);
  CHECK(r.at("delta_max").is_null());  // only one method produced amplitudes

  const RunResult formal =
      run("barrier --E 1 --V0 3 --p2 0.5 --L 1 --formal --format jsonl");
  REQUIRE(formal.code == 0);
  const auto f = parse_jsonl(formal.out).at(0);
  CHECK(f.at("closed_formal") == true);
  CHECK(std::abs(f.at("closed_t_re").get<double>() - (-0.6986529045308385)) < 1e-12);
  CHECK(std::abs(f.at("closed_t_im").get<double>() - (-0.31767413575207354)) < 1e-12);
  CHECK(f.at("delta_max").get<double>() < 1e-10);
}

TEST_CASE("series rows expose the divergence term by term") {
  const RunResult res =
      run("series --E 1 --V0 3 --p2 0.5 --L 1 --max-terms 5 --format jsonl");
  REQUIRE(res.code == 0);
  const auto rows = parse_jsonl(res.out);
  REQUIRE(rows.size() == 6);  // prompt reflection + 5 loop passes
  CHECK(rows[0].at("contribution") == 0);
  CHECK(rows[0].at("term_t_re").is_null());
  CHECK_FALSE(rows[0].at("term_r_re").is_null());
  double prev = 0.0;
  for (const auto& r : rows) {
    CHECK(r.at("convergent") == false);
    CHECK(std::abs(r.at("loop_abs").get<double>() - 6.8541019662496847) < 1e-12);
    if (!r.at("term_t_abs").is_null()) {
      const double mag = r.at("term_t_abs").get<double>();
      CHECK(mag > prev);
      prev = mag;
    }
  }
}

TEST_CASE("series partial sums reach the closed form when convergent") {
  const RunResult res = run("series --E 3 --V0 1 --p2 1 --L 1 --format jsonl");
  REQUIRE(res.code == 0);
  const auto rows = parse_jsonl(res.out);
  REQUIRE(rows.size() >= 3);
  const auto& last = rows.back();
  CHECK(last.at("convergent") == true);
  CHECK(std::abs(last.at("partial_t_re").get<double>() - 0.44502800771136336) < 1e-10);
  CHECK(std::abs(last.at("partial_t_im").get<double>() - (-0.87346493046820606)) < 1e-10);
  CHECK(std::abs(last.at("partial_r_re").get<double>() - 0.094323691889168809) < 1e-10);
}

TEST_CASE("bounce report tabulates the runaway gain") {
  const RunResult res = run("klein-report --bounces 4 --format jsonl");
  REQUIRE(res.code == 0);
  const auto rows = parse_jsonl(res.out);
  REQUIRE(rows.size() == 5);
  double prev = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CHECK(r.at("bounce") == (std::int64_t)i);
    CHECK(std::abs(r.at("loop_abs").get<double>() - 6.8541019662496847) < 1e-12);
    CHECK(std::abs(r.at("bounce_period").get<double>() - 2.0655911179772892) < 1e-12);
    const double growth = r.at("per_bounce_growth").get<double>();
    CHECK(growth > prev);
    prev = growth;
  }
  CHECK(rows[0].at("hole_count_proxy").get<double>() == 1.0);
}

TEST_CASE("graphene accepts degrees and device units") {
  const RunResult deg = run("graphene --E 3 --V0 1 --phi 30 --degrees --format jsonl");
  REQUIRE(deg.code == 0);
  const auto r = parse_jsonl(deg.out).at(0);
  CHECK(std::abs(r.at("t2").get<double>() - 0.84817171143210845) < 1e-12);
  CHECK(std::abs(r.at("theta").get<double>() - 0.8480620789814809) < 1e-12);

  const RunResult dev = run(
      "graphene --units device --E 0.4 --V0 0.1 --phi 0.3 --L 50 --format jsonl");
  REQUIRE(dev.code == 0);
  const auto d = parse_jsonl(dev.out).at(0);
  CHECK(d.at("units") == "device");
  CHECK(std::abs(d.at("t2").get<double>() - 0.9906636582136574) < 1e-12);
}

TEST_CASE("graphene map emits a fixed-energy angular row scan") {
  const RunResult res = run(
      "graphene map --E 3 --V0 1 --L 1 --phi-from -0.5 --phi-to 0.5 --phi-steps 5 "
      "--format jsonl");
  REQUIRE(res.code == 0);
  const auto rows = parse_jsonl(res.out);
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    CHECK(r.at("axis") == "energy");
    CHECK(r.at("valid") == true);
  }
  CHECK(std::abs(rows[2].at("phi").get<double>()) < 1e-12);
  CHECK(std::abs(rows[2].at("t2").get<double>() - 1.0) < 1e-13);
  CHECK(std::abs(rows[0].at("t2").get<double>() - rows[4].at("t2").get<double>()) <
        1e-13);
}

TEST_CASE("config file supplies defaults, flags win") {
  namespace fs = std::filesystem;
  const fs::path cfg = fs::path("cli_test_config.ini");
  {
    std::ofstream out(cfg);
    out << "format=jsonl\n[step]\nE=1\nV0=3\np2=0.5\n";
  }
  const RunResult from_file = run("--config " + cfg.string() + " step");
  REQUIRE(from_file.code == 0);
  const auto r = parse_jsonl(from_file.out).at(0);
  CHECK(r.at("regime") == "klein");
  CHECK(std::abs(r.at("r0_abs2").get<double>() - 6.8541019662496847) < 1e-12);

  // explicit flag overrides the file; E = V0 = 3 sits in the evanescent wedge
  const RunResult overridden = run("--config " + cfg.string() + " step --E 3");
  REQUIRE(overridden.code == 0);
  const auto o = parse_jsonl(overridden.out).at(0);
  CHECK(o.at("E").get<double>() == 3.0);
  CHECK(o.at("regime") == "evanescent");
  CHECK(o.at("r0_abs2").get<double>() == 1.0);
  fs::remove(cfg);
}

TEST_CASE("file output and SVG plots are deterministic") {
  namespace fs = std::filesystem;
  const fs::path csv_a = "cli_test_a.csv", csv_b = "cli_test_b.csv";
  const fs::path svg_a = "cli_test_a.svg", svg_b = "cli_test_b.svg";
  const std::string base =
      "graphene --sweep E --from 2 --to 4 --steps 21 --V0 1 --phi 0.4 --L 1.5";
  const RunResult ra =
      run(base + " --out " + csv_a.string() + " --plot " + svg_a.string());
  const RunResult rb =
      run(base + " --out " + csv_b.string() + " --plot " + svg_b.string());
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(ra.out.empty());  // records went to the file
  const std::string csv = slurp(csv_a);
  CHECK(count_lines(csv) == 22);
  CHECK(csv == slurp(csv_b));
  const std::string svg = slurp(svg_a);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg == slurp(svg_b));
  fs::remove(csv_a);
  fs::remove(csv_b);
  fs::remove(svg_a);
  fs::remove(svg_b);
}

TEST_CASE("packet summary approaches the coherent reference for a thin barrier") {
  const RunResult res = run(
      "packet --sigma-E 0.05 --p2 0.5 --L-over-width 0.05 --format jsonl");
  REQUIRE(res.code == 0);
  const auto rows = parse_jsonl(res.out);
  REQUIRE(rows.size() == 1);
  const auto& r = rows[0];
  CHECK(r.at("error").is_null());
  CHECK(std::abs(r.at("total_norm").get<double>() - 1.0) < 5e-3);
  const double pt = r.at("p_transmitted").get<double>();
  const double coh = r.at("coherent_ref").get<double>();
  CHECK(std::abs(pt - coh) < 0.02 * coh);
  CHECK(r.at("n_E").get<std::int64_t>() >= 33);
}

TEST_CASE("usage errors exit nonzero, domain tags do not") {
  CHECK(run("step --no-such-flag", true).code != 0);
  CHECK(run("", true).code != 0);  // a subcommand is required
  CHECK(run("packet --L 1 --L-over-width 2", true).code != 0);  // mutually exclusive

  // both scan axes at once is a configuration error, reported as exit 2
  const RunResult both = run(
      "graphene map --E-steps 3 --E-from 1 --E-to 2 --L-steps 3 --L-from 1 --L-to 2",
      true);
  CHECK(both.code == 2);
  CHECK(both.out.find("error") != std::string::npos);

  // unsupported zones inside a row are tagged, not fatal
  const RunResult tagged =
      run("barrier --method closed --E 1 --V0 3 --p2 0.5 --format jsonl");
  REQUIRE(tagged.code == 0);
  const auto r = parse_jsonl(tagged.out).at(0);
  CHECK(r.at("closed_t_re").is_null());
  CHECK(r.at("error").is_string());
}
