// Copyright 2026 The xbench Authors
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

// DMU panel ingestion.
//
// CSV layout: the first header cell is "dmu"; every other column is headed
// "in:<name>" (an input) or "out:<name>" (an output). Factor indices follow
// the column order of the file within each kind. Every value must be a finite,
// strictly positive number written with a dot decimal separator.
//
//   dmu,in:LAB,in:FUEL,out:PASS
//   SINGAPORE,10864,523,32404

#ifndef XBENCH_DATASET_HPP_
#define XBENCH_DATASET_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <utility>
#include <vector>

#include "xbench/errors.hpp"

namespace xbench {

/// One decision making unit: an id plus its observed inputs and outputs.
struct DmuRecord {
  std::string id;
  std::vector<double> inputs;
  std::vector<double> outputs;

  friend bool operator==(const DmuRecord&, const DmuRecord&) = default;
};

/// Immutable, validated panel of n DMUs with m inputs and s outputs.
class Dataset {
 public:
  /// Throws DataError unless n, m, s >= 1, ids are unique, dimensions agree
  /// and every value is finite and strictly positive.
  Dataset(std::vector<std::string> input_names,
          std::vector<std::string> output_names,
          std::vector<DmuRecord> records)
      : input_names_(std::move(input_names)),
        output_names_(std::move(output_names)),
        records_(std::move(records)) {
    if (input_names_.empty()) throw DataError("dataset needs at least one input");
    if (output_names_.empty()) throw DataError("dataset needs at least one output");
    if (records_.empty()) throw DataError("dataset needs at least one DMU");
    std::unordered_set<std::string> seen;
    for (std::size_t j = 0; j < records_.size(); ++j) {
      const DmuRecord& r = records_[j];
      if (r.id.empty()) throw DataError("DMU " + std::to_string(j) + " has an empty id");
      if (!seen.insert(r.id).second) throw DataError("duplicate DMU id '" + r.id + "'");
      if (r.inputs.size() != m() || r.outputs.size() != s()) {
        throw DataError("DMU '" + r.id + "' has wrong number of factors");
      }
      for (std::size_t i = 0; i < m(); ++i) check_value(r, input_names_[i], r.inputs[i]);
      for (std::size_t k = 0; k < s(); ++k) check_value(r, output_names_[k], r.outputs[k]);
    }
  }

  std::size_t n() const { return records_.size(); }
  std::size_t m() const { return input_names_.size(); }
  std::size_t s() const { return output_names_.size(); }

  const std::vector<std::string>& input_names() const { return input_names_; }
  const std::vector<std::string>& output_names() const { return output_names_; }
  const std::vector<DmuRecord>& records() const { return records_; }
  const DmuRecord& operator[](std::size_t j) const { return records_[j]; }

  double x(std::size_t j, std::size_t i) const { return records_[j].inputs[i]; }
  double y(std::size_t j, std::size_t r) const { return records_[j].outputs[r]; }

  /// Factor f in [0, m+s): inputs first, then outputs.
  double factor(std::size_t j, std::size_t f) const {
    return f < m() ? x(j, f) : y(j, f - m());
  }
  std::string factor_name(std::size_t f) const {
    return f < m() ? input_names_[f] : output_names_[f - m()];
  }

  /// Index of the DMU with this id, or n() if absent.
  std::size_t index_of(std::string_view id) const {
    for (std::size_t j = 0; j < n(); ++j) {
      if (records_[j].id == id) return j;
    }
    return n();
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  static void check_value(const DmuRecord& r, const std::string& column, double v) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw DataError("DMU '" + r.id + "', column '" + column +
                      "': values must be finite and strictly positive");
    }
  }

  std::vector<std::string> input_names_;
  std::vector<std::string> output_names_;
  std::vector<DmuRecord> records_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits one CSV line. Double-quoted fields may contain commas; "" escapes a
// quote inside a quoted field.
inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && trim(cur).empty()) {
      cur.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw DataError("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(was_quoted ? cur : std::string(trim(cur)));
  return fields;
}

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string quote_csv(const std::string& field) {
  if (field.find_first_of(",\"") == std::string::npos && trim(field) == field) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

/// Parses a CSV document. Errors name the offending line and column.
inline Dataset parse_dataset(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= text.size();) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  // UTF-8 byte order mark.
  if (!lines.empty() && lines[0].starts_with("\xEF\xBB\xBF")) lines[0].remove_prefix(3);

  std::size_t header_line = 0;
  while (header_line < lines.size() && detail::trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size()) throw DataError("missing header row");

  const auto header = detail::split_csv_line(lines[header_line], header_line + 1);
  if (header.empty() || header[0] != "dmu") {
    throw DataError("line " + std::to_string(header_line + 1) +
                    ": first header column must be 'dmu'");
  }
  enum class Kind { kInput, kOutput };
  std::vector<Kind> kinds;
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string& h = header[c];
    if (h.starts_with("in:") && h.size() > 3) {
      kinds.push_back(Kind::kInput);
      input_names.push_back(h.substr(3));
    } else if (h.starts_with("out:") && h.size() > 4) {
      kinds.push_back(Kind::kOutput);
      output_names.push_back(h.substr(4));
    } else {
      throw DataError("line " + std::to_string(header_line + 1) + ", column " +
                      std::to_string(c + 1) + ": header '" + h +
                      "' must start with 'in:' or 'out:'");
    }
  }

  std::vector<DmuRecord> records;
  std::unordered_set<std::string> ids;
  for (std::size_t li = header_line + 1; li < lines.size(); ++li) {
    if (detail::trim(lines[li]).empty()) continue;
    const std::size_t line_no = li + 1;
    const auto fields = detail::split_csv_line(lines[li], line_no);
    if (fields.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    DmuRecord rec;
    rec.id = fields[0];
    if (rec.id.empty()) throw DataError("line " + std::to_string(line_no) + ": empty dmu id");
    if (!ids.insert(rec.id).second) {
      throw DataError("line " + std::to_string(line_no) + ": duplicate dmu id '" + rec.id + "'");
    }
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const std::string& cell = fields[c];
      const std::string where = "line " + std::to_string(line_no) + " (dmu '" + rec.id +
                                "'), column '" + header[c] + "'";
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw DataError(where + ": '" + cell + "' is not a number");
      }
      if (v <= 0.0) throw DataError(where + ": value must be strictly positive, got " + cell);
      (kinds[c - 1] == Kind::kInput ? rec.inputs : rec.outputs).push_back(v);
    }
    records.push_back(std::move(rec));
  }
  return Dataset(std::move(input_names), std::move(output_names), std::move(records));
}

inline Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

/// Inverse of parse_dataset: inputs first, then outputs, shortest round-trip
/// number formatting.
inline std::string serialize_dataset(const Dataset& d) {
  std::string out = "dmu";
  for (const auto& name : d.input_names()) out += "," + detail::quote_csv("in:" + name);
  for (const auto& name : d.output_names()) out += "," + detail::quote_csv("out:" + name);
  out += '\n';
  for (const auto& r : d.records()) {
    out += detail::quote_csv(r.id);
    for (double v : r.inputs) out += "," + detail::format_double(v);
    for (double v : r.outputs) out += "," + detail::format_double(v);
    out += '\n';
  }
  return out;
}

/// Multiplies factor column f (inputs first, then outputs) by factors[f].
inline Dataset rescale(const Dataset& d, std::span<const double> factors) {
  if (factors.size() != d.m() + d.s()) {
    throw DataError("rescale needs " + std::to_string(d.m() + d.s()) + " factors");
  }
  for (double f : factors) {
    if (!std::isfinite(f) || f <= 0.0) throw DataError("rescale factors must be positive");
  }
  std::vector<DmuRecord> records = d.records();
  for (auto& r : records) {
    for (std::size_t i = 0; i < d.m(); ++i) r.inputs[i] *= factors[i];
    for (std::size_t k = 0; k < d.s(); ++k) r.outputs[k] *= factors[d.m() + k];
  }
  return Dataset(d.input_names(), d.output_names(), std::move(records));
}

}  // namespace xbench

#endif  // XBENCH_DATASET_HPP_
