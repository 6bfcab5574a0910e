// Copyright 2026 The ipte Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ipte/results.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>

#include "ipte/csv.hpp"
#include "ipte/error.hpp"

namespace ipte::io {

namespace {

[[noreturn]] void RowError(std::size_t line, const std::string& what) {
  throw DataError("results line " + std::to_string(line) + ": " + what);
}

long ParseInt(const std::string& s, std::size_t line, const char* column) {
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || errno == ERANGE ||
      v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    RowError(line, std::string("bad ") + column + " '" + s + "'");
  }
  return v;
}

double ParseReal(const std::string& s, std::size_t line, const char* column) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    RowError(line, std::string("bad ") + column + " '" + s + "'");
  }
  return v;
}

}  // namespace

std::string FormatReal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void WriteResults(std::ostream& out,
                  std::span<const analysis::TeRecord> records) {
  out << kResultsHeader << '\n';
  for (const analysis::TeRecord& r : records) {
    out << csv::Escape(r.run_id) << ',' << r.epoch << ',' << r.window_index
        << ',' << r.pair_id << ',' << FormatReal(r.te_mean) << ','
        << r.pair_count << '\n';
  }
}

void WriteResults(const std::filesystem::path& path,
                  std::span<const analysis::TeRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write results file: " + path.string());
  WriteResults(out, records);
  if (!out) throw DataError("failed writing results file: " + path.string());
}

std::vector<analysis::TeRecord> ReadResults(std::istream& in) {
  const std::vector<csv::Row> rows = csv::Parse(in);
  if (rows.empty()) throw DataError("empty results file");
  static const std::vector<std::string> kColumns = {
      "run_id", "epoch", "window_index", "pair_id", "te_mean", "pair_count"};
  if (rows.front().fields != kColumns) {
    throw DataError("results file header must be '" +
                    std::string(kResultsHeader) + "'");
  }
  std::vector<analysis::TeRecord> records;
  records.reserve(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const csv::Row& row = rows[i];
    if (row.fields.size() != kColumns.size()) {
      RowError(row.line, "expected 6 fields");
    }
    analysis::TeRecord r;
    r.run_id = row.fields[0];
    r.epoch = static_cast<int>(ParseInt(row.fields[1], row.line, "epoch"));
    r.window_index =
        static_cast<int>(ParseInt(row.fields[2], row.line, "window_index"));
    r.pair_id = static_cast<int>(ParseInt(row.fields[3], row.line, "pair_id"));
    r.te_mean = ParseReal(row.fields[4], row.line, "te_mean");
    r.pair_count =
        static_cast<int>(ParseInt(row.fields[5], row.line, "pair_count"));
    if (r.te_mean < 0.0) RowError(row.line, "negative te_mean");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<analysis::TeRecord> ReadResults(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open results file: " + path.string());
  return ReadResults(in);
}

}  // namespace ipte::io
