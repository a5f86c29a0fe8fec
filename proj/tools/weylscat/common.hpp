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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <weylscat/io/record.hpp>
#include <weylscat/io/svg.hpp>
#include <weylscat/units.hpp>
#include <weylscat/weylscat.hpp>

namespace wtool {

using weylscat::cplx;
using weylscat::Kinematics;

// Options shared by every subcommand. Device units: energies in eV, lengths
// in nm, times in fs, v_F = 1 nm/fs, hbar = 0.6582119569 eV fs; transverse
// momentum flags are then p*v_F in eV. Natural units: hbar = c = 1.
struct GlobalOpts {
  std::string units = "natural";
  std::string format = "csv";
  std::string out;   // empty: stdout
  std::string plot;  // empty: no plot file
  unsigned threads = 0;
};

inline Kinematics base_kinematics(const GlobalOpts& g) {
  Kinematics k;
  k.c = 1.0;
  k.hbar = (g.units == "device") ? weylscat::units::hbar_eV_fs : 1.0;
  return k;
}

inline weylscat::io::Format parse_format(const GlobalOpts& g) {
  return g.format == "csv" ? weylscat::io::Format::csv : weylscat::io::Format::jsonl;
}

// Output sink: file when --out was given, stdout otherwise. Binary mode keeps
// the LF line endings literal.
struct OutputTarget {
  std::ofstream file;
  std::ostream* os = &std::cout;
};

inline OutputTarget open_output(const GlobalOpts& g) {
  OutputTarget t;
  if (!g.out.empty()) {
    t.file.open(g.out, std::ios::binary | std::ios::trunc);
    if (!t.file) throw weylscat::config_error("cannot open output file: " + g.out);
    t.os = &t.file;
  }
  return t;
}

// Inclusive linear grid over one scan parameter.
struct Sweep {
  std::string param;  // empty: no sweep, single point
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 101;

  std::size_t count() const { return param.empty() ? 1 : steps; }
  double value(std::size_t i) const {
    if (steps <= 1) return from;
    return from + (to - from) * (double)i / (double)(steps - 1);
  }
};

// First fields of every record; schema_version guards downstream parsers.
inline void prelude(weylscat::io::Record& rec, const char* tool, std::int64_t seq,
                    const GlobalOpts& g) {
  rec.add("schema_version", std::int64_t{1});
  rec.add("tool", std::string(tool));
  rec.add("seq", seq);
  rec.add("units", g.units);
}

inline void add_complex(weylscat::io::Record& rec, const std::string& key, cplx z) {
  rec.add(key + "_re", z.real());
  rec.add(key + "_im", z.imag());
}

inline void add_complex_null(weylscat::io::Record& rec, const std::string& key) {
  rec.add_null(key + "_re");
  rec.add_null(key + "_im");
}

inline void add_error(weylscat::io::Record& rec, const std::string& err) {
  if (err.empty())
    rec.add_null("error");
  else
    rec.add("error", err);
}

// Passthrough writer that harvests (x, y) columns for the optional SVG plot.
// Rows stream to the inner writer untouched; only two doubles per row are
// retained, so plotting does not break the memory-bounded scan contract.
class PlotTap final : public weylscat::io::RecordWriter {
 public:
  PlotTap(weylscat::io::RecordWriter& inner, bool enabled, std::string x_key,
          std::vector<std::string> y_keys, std::string group_key = "")
      : inner_(inner),
        enabled_(enabled),
        x_key_(std::move(x_key)),
        y_keys_(std::move(y_keys)),
        group_key_(std::move(group_key)) {}

  void write(const weylscat::io::Record& rec) override {
    inner_.write(rec);
    if (!enabled_) return;
    double x = 0.0;
    if (!find_double(rec, x_key_, x)) return;
    std::string group;
    if (!group_key_.empty()) {
      double gv = 0.0;
      if (!find_double(rec, group_key_, gv)) return;
      group = group_key_ + "=" + weylscat::io::format_double(gv);
    }
    for (const auto& yk : y_keys_) {
      double y = 0.0;
      if (!find_double(rec, yk, y)) continue;
      auto* s = series_for(y_keys_.size() > 1 ? (group.empty() ? yk : yk + " " + group)
                                              : (group.empty() ? yk : group));
      if (!s) continue;  // palette exhausted
      s->x.push_back(x);
      s->y.push_back(y);
    }
  }

  void finish() override { inner_.finish(); }

  const std::vector<weylscat::io::PlotSeries>& series() const { return series_; }

 private:
  weylscat::io::PlotSeries* series_for(const std::string& label) {
    for (auto& s : series_)
      if (s.label == label) return &s;
    static const char* palette[] = {"#1f6fb2", "#d1495b", "#2e8b57", "#e26d0e",
                                    "#6a4c93", "#8c5e2a", "#13889c", "#666666"};
    if (series_.size() >= std::size(palette)) return nullptr;
    weylscat::io::PlotSeries s;
    s.label = label;
    s.color = palette[series_.size()];
    series_.push_back(std::move(s));
    return &series_.back();
  }

  static bool find_double(const weylscat::io::Record& rec, const std::string& key,
                          double& out) {
    for (const auto& [k, v] : rec.fields)
      if (k == key) {
        if (const double* d = std::get_if<double>(&v)) {
          out = *d;
          return true;
        }
        return false;
      }
    return false;
  }

  weylscat::io::RecordWriter& inner_;
  bool enabled_;
  std::string x_key_;
  std::vector<std::string> y_keys_;
  std::string group_key_;
  std::vector<weylscat::io::PlotSeries> series_;
};

inline void write_plot_file(const GlobalOpts& g, const PlotTap& tap,
                            const std::string& title, const std::string& xlabel,
                            const std::string& ylabel) {
  if (g.plot.empty()) return;
  std::ofstream os(g.plot, std::ios::binary | std::ios::trunc);
  if (!os) throw weylscat::config_error("cannot open plot file: " + g.plot);
  weylscat::io::write_svg_plot(os, title, xlabel, ylabel, tap.series());
}

}  // namespace wtool
