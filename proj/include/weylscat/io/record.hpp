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
#include <cstdint>
#include <cstdio>
#include <memory>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "../errors.hpp"

namespace weylscat::io {

// Flat key/value record, the unit of all CLI output. Values are doubles
// (serialized with 17 significant digits, enough to round-trip), integers,
// booleans, strings, or null (monostate).
using Value = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct Record {
  std::vector<std::pair<std::string, Value>> fields;

  void add(std::string key, Value v) { fields.emplace_back(std::move(key), std::move(v)); }
  void add_null(std::string key) { add(std::move(key), std::monostate{}); }
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RecordWriter {
  virtual ~RecordWriter() = default;
  virtual void write(const Record& rec) = 0;
  virtual void finish() {}
};

// CSV: header from the first record, comma separation, LF endings. Later
// records must repeat the same keys in the same order. Nulls serialize as
// empty cells, nan spells "nan" (strtod-parsable).
class CsvWriter final : public RecordWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void write(const Record& rec) override {
    if (keys_.empty()) {
      for (const auto& [k, v] : rec.fields) keys_.push_back(k);
      for (std::size_t i = 0; i < keys_.size(); ++i)
        os_ << (i ? "," : "") << quote(keys_[i]);
      os_ << '\n';
    }
    if (rec.fields.size() != keys_.size())
      throw config_error("csv: record does not match the header schema");
    for (std::size_t i = 0; i < rec.fields.size(); ++i) {
      if (rec.fields[i].first != keys_[i])
        throw config_error("csv: record does not match the header schema");
      os_ << (i ? "," : "") << to_cell(rec.fields[i].second);
    }
    os_ << '\n';
  }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }

  static std::string to_cell(const Value& v) {
    switch (v.index()) {
      case 0: return "";
      case 1: return format_double(std::get<double>(v));
      case 2: return std::to_string(std::get<std::int64_t>(v));
      case 3: return std::get<bool>(v) ? "true" : "false";
      default: return quote(std::get<std::string>(v));
    }
  }

  std::ostream& os_;
  std::vector<std::string> keys_;
};

// Newline-delimited JSON, one object per record. Doubles keep 17 significant
// digits; non-finite doubles become null (JSON has no literal for them).
class JsonlWriter final : public RecordWriter {
 public:
  explicit JsonlWriter(std::ostream& os) : os_(os) {}

  void write(const Record& rec) override {
    os_ << '{';
    for (std::size_t i = 0; i < rec.fields.size(); ++i) {
      if (i) os_ << ',';
      os_ << escape(rec.fields[i].first) << ':' << to_json(rec.fields[i].second);
    }
    os_ << "}\n";
  }

 private:
  static std::string escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
          if ((unsigned char)c < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
          } else {
            out += c;
          }
      }
    }
    return out + "\"";
  }

  static std::string to_json(const Value& v) {
    switch (v.index()) {
      case 0: return "null";
      case 1: {
        const double d = std::get<double>(v);
        if (!std::isfinite(d)) return "null";
        return format_double(d);
      }
      case 2: return std::to_string(std::get<std::int64_t>(v));
      case 3: return std::get<bool>(v) ? "true" : "false";
      default: return escape(std::get<std::string>(v));
    }
  }

  std::ostream& os_;
};

enum class Format { csv, jsonl };

inline std::unique_ptr<RecordWriter> make_writer(Format f, std::ostream& os) {
  if (f == Format::csv) return std::make_unique<CsvWriter>(os);
  return std::make_unique<JsonlWriter>(os);
}

}  // namespace weylscat::io
