// Copyright 2026 The rbreuse Authors
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

// Plain comma separated tables.  No quoting: every field the tools write
// is a number or a bare word.  Numbers use the shortest round-trip form, so
// parse followed by write reproduces a file byte for byte.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rbreuse/calibration.hpp"
#include "rbreuse/error.hpp"
#include "rbreuse/format.hpp"
#include "rbreuse/optimizer.hpp"
#include "rbreuse/rb.hpp"

namespace rbreuse {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; throws if absent.
  std::size_t column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DomainError("missing CSV column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << fields[i];
  }
  os << '\n';
}

}  // namespace detail

/// Reads a table with a header line.  Blank lines and lines starting with
/// '#' are skipped.
inline CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = detail::split_fields(view);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw DomainError("CSV line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw DomainError("CSV input has no header");
  return t;
}

inline CsvTable read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open '" + path + "'");
  return read_csv(is);
}

inline void write_csv(std::ostream& os, const CsvTable& t) {
  detail::write_row(os, t.header);
  for (const auto& row : t.rows) detail::write_row(os, row);
}

// Runtime table: R,N,T_seconds.  Extra columns are ignored on input.

inline std::vector<RuntimeRecord> runtime_records(const CsvTable& t) {
  const auto ir = t.column("R");
  const auto in = t.column("N");
  const auto it = t.column("T_seconds");
  std::vector<RuntimeRecord> out;
  for (const auto& row : t.rows) {
    out.push_back({parse_int(row[ir]), parse_int(row[in]), parse_double(row[it])});
  }
  return out;
}

inline std::vector<RuntimeRecord> read_runtime_csv(const std::string& path) {
  return runtime_records(read_csv_file(path));
}

inline CsvTable runtime_table(const std::vector<RuntimeRecord>& records) {
  CsvTable t{{"R", "N", "T_seconds"}, {}};
  for (const auto& r : records) {
    t.rows.push_back({std::to_string(r.R), std::to_string(r.N), format_number(r.T)});
  }
  return t;
}

/// Calibration report: R,N,T,T0_pred,ratio.
inline CsvTable calibration_table(const std::vector<RuntimeRecord>& records, const LadderFit& fit) {
  CsvTable t{{"R", "N", "T", "T0_pred", "ratio"}, {}};
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    t.rows.push_back({std::to_string(r.R), std::to_string(r.N), format_number(r.T),
                      format_number(fit.predicted[i]), format_number(fit.predicted[i] / r.T)});
  }
  return t;
}

// Decay table: m,mean,variance,N,R.

inline CsvTable decay_table(const std::vector<DecayRow>& rows) {
  CsvTable t{{"m", "mean", "variance", "N", "R"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.m), format_number(r.mean), format_number(r.variance),
                      std::to_string(r.N), std::to_string(r.R)});
  }
  return t;
}

inline std::vector<DecayRow> decay_rows(const CsvTable& t) {
  const auto im = t.column("m");
  const auto imean = t.column("mean");
  const auto ivar = t.column("variance");
  const auto in = t.column("N");
  const auto ir = t.column("R");
  std::vector<DecayRow> out;
  for (const auto& row : t.rows) {
    out.push_back({static_cast<int>(parse_int(row[im])), parse_double(row[imean]),
                   parse_double(row[ivar]), parse_int(row[in]), parse_int(row[ir])});
  }
  return out;
}

/// Per-sequence records: m,sequence,p,k.
inline CsvTable sequence_table(const std::vector<SequenceResult>& records) {
  CsvTable t{{"m", "sequence", "p", "k"}, {}};
  for (const auto& r : records) {
    t.rows.push_back({std::to_string(r.m), std::to_string(r.sequence_id), format_number(r.p),
                      std::to_string(r.k)});
  }
  return t;
}

// Sweep table, one row per (sweep value, m).

struct SweepRow {
  std::string param;
  double value = 0.0;
  int m = 0;
  StatPair stats;
  OptimumKind kind = OptimumKind::kFinite;
  std::optional<std::int64_t> r_star;
  double v_at_1 = 0.0;
  double v_at_r0 = 0.0;
  double v_at_rstar = 0.0;
};

/// R_star column: the integer optimum, or `unbounded`, `raw0:1` or
/// `degenerate`.
inline std::string r_star_field(OptimumKind kind, const std::optional<std::int64_t>& r) {
  switch (kind) {
    case OptimumKind::kFinite: return std::to_string(r.value());
    case OptimumKind::kUnbounded: return "unbounded";
    case OptimumKind::kRawZero: return "raw0:" + std::to_string(r.value_or(1));
    case OptimumKind::kDegenerate: return "degenerate";
  }
  return "?";
}

inline std::pair<OptimumKind, std::optional<std::int64_t>> parse_r_star_field(std::string_view s) {
  if (s == "unbounded") return {OptimumKind::kUnbounded, std::nullopt};
  if (s == "degenerate") return {OptimumKind::kDegenerate, std::nullopt};
  if (s.substr(0, 5) == "raw0:") return {OptimumKind::kRawZero, parse_int(s.substr(5))};
  return {OptimumKind::kFinite, parse_int(s)};
}

inline const std::vector<std::string>& sweep_header() {
  static const std::vector<std::string> h{"param", "value", "m", "A", "B", "Y", "Z",
                                          "stderr_A", "stderr_B", "R_star", "V_at_1",
                                          "V_at_R0", "V_at_Rstar"};
  return h;
}

inline CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  CsvTable t{sweep_header(), {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.param, format_number(r.value), std::to_string(r.m),
                      format_number(r.stats.A), format_number(r.stats.B),
                      format_number(r.stats.Y), format_number(r.stats.Z),
                      format_number(r.stats.stderr_A), format_number(r.stats.stderr_B),
                      r_star_field(r.kind, r.r_star), format_number(r.v_at_1),
                      format_number(r.v_at_r0), format_number(r.v_at_rstar)});
  }
  return t;
}

inline std::vector<SweepRow> sweep_rows(const CsvTable& t) {
  if (t.header != sweep_header()) throw DomainError("not a sweep table");
  std::vector<SweepRow> out;
  for (const auto& row : t.rows) {
    SweepRow r;
    r.param = row[0];
    r.value = parse_double(row[1]);
    r.m = static_cast<int>(parse_int(row[2]));
    r.stats.A = parse_double(row[3]);
    r.stats.B = parse_double(row[4]);
    r.stats.Y = parse_double(row[5]);
    r.stats.Z = parse_double(row[6]);
    r.stats.stderr_A = parse_double(row[7]);
    r.stats.stderr_B = parse_double(row[8]);
    std::tie(r.kind, r.r_star) = parse_r_star_field(row[9]);
    r.v_at_1 = parse_double(row[10]);
    r.v_at_r0 = parse_double(row[11]);
    r.v_at_rstar = parse_double(row[12]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace rbreuse
