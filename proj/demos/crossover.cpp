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

// Transmitted probability of a finite wave packet versus barrier width,
// against the coherent and incoherent references. Thin barriers interfere,
// wide ones add intensities. Optional argument: output SVG path.

#include <cstdio>
#include <fstream>
#include <vector>

#include <weylscat/io/svg.hpp>
#include <weylscat/weylscat.hpp>

int main(int argc, char** argv) {
  using namespace weylscat;

  WavePacketSpec base;
  base.E0 = 2.0;
  base.sigma_E = 0.015;
  base.p2 = 0.9;
  const Kinematics pattern{1.0, 1.0, 0.0, 0.0, 1.0, 1.0};

  const double w = packet_width(base, pattern);
  std::vector<double> widths;
  for (const double ratio : {0.05, 0.15, 0.4, 1.0, 2.0, 4.0, 6.0, 10.0})
    widths.push_back(ratio * w);

  const std::vector<CrossoverPoint> pts =
      coherence_crossover(base, pattern, widths);

  std::printf("L_over_width,p_transmitted,coherent_ref,incoherent_ref\n");
  for (const CrossoverPoint& p : pts)
    std::printf("%.6f,%.12f,%.12f,%.12f\n", p.l_over_width, p.p_transmitted,
                p.coherent_ref, p.incoherent_ref);

  if (argc > 1) {
    io::PlotSeries packet{"packet", "#1f6fb2", {}, {}};
    io::PlotSeries coherent{"coherent", "#c23b22", {}, {}};
    io::PlotSeries incoherent{"incoherent", "#2e8b57", {}, {}};
    for (const CrossoverPoint& p : pts) {
      packet.x.push_back(p.l_over_width);
      packet.y.push_back(p.p_transmitted);
      coherent.x.push_back(p.l_over_width);
      coherent.y.push_back(p.coherent_ref);
      incoherent.x.push_back(p.l_over_width);
      incoherent.y.push_back(p.incoherent_ref);
    }
    std::ofstream out(argv[1]);
    io::write_svg_plot(out, "coherence crossover", "L / packet width",
                       "transmitted probability", {packet, coherent, incoherent});
    std::fprintf(stderr, "wrote %s\n", argv[1]);
  }
  return 0;
}
