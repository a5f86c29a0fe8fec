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
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "../errors.hpp"

namespace weylscat::io {

// Minimal deterministic line plots: fixed canvas, no timestamps, %.6g
// coordinates. Enough for the optional --plot outputs; anything fancier
// belongs in a real plotting tool fed from the CSV/JSON records.
struct PlotSeries {
  std::string label;
  std::string color = "#1f6fb2";
  std::vector<double> x, y;
};

inline void write_svg_plot(std::ostream& os, const std::string& title,
                           const std::string& xlabel, const std::string& ylabel,
                           const std::vector<PlotSeries>& series) {
  const double W = 860, H = 520, ml = 72, mr = 24, mt = 40, mb = 56;
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  bool seen = false;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw config_error("plot: x/y size mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!seen) {
        x_lo = x_hi = s.x[i];
        y_lo = y_hi = s.y[i];
        seen = true;
      }
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1;
  if (y_hi <= y_lo) y_hi = y_lo + 1;
  const double pad = 0.04 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - y_lo) / (y_hi - y_lo) * (H - mt - mb); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
     << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
     << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << title << "</text>\n";

  const int ticks = 6;
  os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int i = 0; i <= ticks; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / ticks;
    const double yv = y_lo + (y_hi - y_lo) * i / ticks;
    os << "<line x1=\"" << fmt(px(xv)) << "\" y1=\"" << py(y_lo) << "\" x2=\""
       << fmt(px(xv)) << "\" y2=\"" << py(y_hi) << "\" stroke=\"#ddd\"/>\n"
       << "<line x1=\"" << px(x_lo) << "\" y1=\"" << fmt(py(yv)) << "\" x2=\""
       << px(x_hi) << "\" y2=\"" << fmt(py(yv)) << "\" stroke=\"#ddd\"/>\n"
       << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << H - mb + 16
       << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n"
       << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(py(yv) + 4)
       << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
  }
  os << "</g>\n"
     << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
     << xlabel << "</text>\n"
     << "<text x=\"18\" y=\"" << H / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        "transform=\"rotate(-90 18 "
     << H / 2 << ")\">" << ylabel << "</text>\n";

  int legend_y = (int)mt + 8;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      os << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
    }
    os << "\"/>\n";
    if (!s.label.empty()) {
      os << "<rect x=\"" << W - mr - 150 << "\" y=\"" << legend_y - 9
         << "\" width=\"14\" height=\"4\" fill=\"" << s.color << "\"/>\n"
         << "<text x=\"" << W - mr - 130 << "\" y=\"" << legend_y
         << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
         << "</text>\n";
      legend_y += 18;
    }
  }
  os << "</svg>\n";
}

}  // namespace weylscat::io
