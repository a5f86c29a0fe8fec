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

// Angular transmission lobes of a planar barrier in a sheet of massless
// carriers, for two barrier heights in the Klein zone. Device units:
// energies in eV, lengths in nm. Optional argument: output SVG path.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include <weylscat/io/svg.hpp>
#include <weylscat/weylscat.hpp>

int main(int argc, char** argv) {
  using namespace weylscat;

  const double E = 0.08;   // eV
  const double L = 102.0;  // nm
  const std::vector<double> heights = {0.45, 0.285};  // eV

  std::vector<double> phis;
  for (int i = 0; i <= 340; ++i)
    phis.push_back((-85.0 + 0.5 * i) * M_PI / 180.0);

  std::vector<io::PlotSeries> curves;
  const char* colors[] = {"#1f6fb2", "#c23b22"};
  std::printf("phi_deg");
  for (const double V0 : heights) std::printf(",t2_V0_%g", V0);
  std::printf("\n");

  std::vector<std::vector<double>> columns;
  for (std::size_t h = 0; h < heights.size(); ++h) {
    const TransmissionMap map =
        angular_map(heights[h], L, phis, {E}, 1.0, units::hbar_eV_fs);
    io::PlotSeries s{"V0 = " + std::to_string(heights[h]) + " eV", colors[h],
                     {}, {}};
    std::vector<double> col;
    for (std::size_t i = 0; i < phis.size(); ++i) {
      const GrapheneCell& cell = map.at(0, i);
      col.push_back(cell.valid ? cell.t2 : std::nan(""));
      if (cell.valid) {
        s.x.push_back(phis[i] * 180.0 / M_PI);
        s.y.push_back(cell.t2);
      }
    }
    columns.push_back(col);
    curves.push_back(s);
  }

  for (std::size_t i = 0; i < phis.size(); ++i) {
    std::printf("%.2f", phis[i] * 180.0 / M_PI);
    for (const auto& col : columns) std::printf(",%.12f", col[i]);
    std::printf("\n");
  }

  // resonant lobes: interior maxima with full transmission
  for (std::size_t h = 0; h < heights.size(); ++h) {
    std::printf("# V0 = %g eV, lobes at phi_deg:", heights[h]);
    const auto& col = columns[h];
    for (std::size_t i = 1; i + 1 < col.size(); ++i)
      if (col[i] > 0.999 && col[i] >= col[i - 1] && col[i] >= col[i + 1])
        std::printf(" %.1f", phis[i] * 180.0 / M_PI);
    std::printf("\n");
  }

  if (argc > 1) {
    std::ofstream out(argv[1]);
    io::write_svg_plot(out, "angular transmission, E = 0.08 eV, L = 102 nm",
                       "incidence angle (deg)", "|t|^2", curves);
    std::fprintf(stderr, "wrote %s\n", argv[1]);
  }
  return 0;
}
