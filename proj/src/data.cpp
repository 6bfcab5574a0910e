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

#include "ipte/data.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>

#include "ipte/csv.hpp"
#include "ipte/error.hpp"

namespace ipte::data {

namespace {

bool ParseDouble(const std::string& text, double& out) {
  const char* begin = text.c_str();
  while (*begin == ' ' || *begin == '\t') ++begin;
  if (*begin == '\0') return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(begin, &end);
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0' && errno != ERANGE && std::isfinite(out);
}

std::size_t ResolveLabelColumn(const CsvSchema& schema,
                               const std::vector<std::string>& header,
                               std::size_t width) {
  if (const auto* name = std::get_if<std::string>(&schema.label_column)) {
    if (!schema.has_header) {
      throw ConfigError("label column given by name but the schema has no header");
    }
    const auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) {
      throw DataError("label column '" + *name + "' not found in header");
    }
    return static_cast<std::size_t>(it - header.begin());
  }
  const int index = std::get<int>(schema.label_column);
  const long resolved = index < 0 ? static_cast<long>(width) + index : index;
  if (resolved < 0 || resolved >= static_cast<long>(width)) {
    throw DataError("label column index out of range");
  }
  return static_cast<std::size_t>(resolved);
}

}  // namespace

void Dataset::Validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw DataError("feature rows and labels differ in count");
  }
  for (int label : labels) {
    if (label < 0 || label >= class_count) {
      throw DataError("label out of range");
    }
  }
  if (!features.allFinite()) throw DataError("non-finite feature value");
}

Dataset Dataset::Subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.name = name;
  out.class_count = class_count;
  out.class_names = class_names;
  out.feature_names = feature_names;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), features.cols());
  out.labels.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) =
        features.row(static_cast<Eigen::Index>(indices[i]));
    out.labels.push_back(labels[indices[i]]);
  }
  return out;
}

Dataset LoadCsv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file: " + path.string());
  std::vector<csv::Row> rows = csv::Parse(in);

  std::vector<std::string> header;
  std::size_t first_data = 0;
  if (schema.has_header) {
    if (rows.empty()) throw DataError("empty dataset");
    header = rows.front().fields;
    first_data = 1;
  }
  if (rows.size() <= first_data) throw DataError("empty dataset");

  const std::size_t width = rows[first_data].fields.size();
  if (schema.has_header && header.size() != width) {
    throw DataError("line " + std::to_string(rows[first_data].line) +
                    ": expected " + std::to_string(header.size()) + " fields");
  }
  const std::size_t label_col = ResolveLabelColumn(schema, header, width);

  std::vector<bool> is_feature(width, true);
  is_feature[label_col] = false;
  for (const std::string& name : schema.ignore_columns) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw DataError("ignored column '" + name + "' not found in header");
    }
    is_feature[static_cast<std::size_t>(it - header.begin())] = false;
  }
  const auto feature_count =
      static_cast<Eigen::Index>(std::count(is_feature.begin(), is_feature.end(), true));
  if (feature_count == 0) throw DataError("dataset has no feature columns");

  Dataset ds;
  ds.name = path.stem().string();
  for (std::size_t c = 0; c < width; ++c) {
    if (is_feature[c]) {
      ds.feature_names.push_back(schema.has_header ? header[c]
                                                   : "f" + std::to_string(c));
    }
  }

  std::map<std::string, int> class_ids;
  std::vector<std::vector<double>> values;
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    if (row.fields.size() != width) {
      throw DataError("line " + std::to_string(row.line) + ": expected " +
                      std::to_string(width) + " fields, got " +
                      std::to_string(row.fields.size()));
    }
    std::vector<double> sample;
    sample.reserve(static_cast<std::size_t>(feature_count));
    for (std::size_t c = 0; c < width; ++c) {
      if (!is_feature[c]) continue;
      double v = 0.0;
      if (!ParseDouble(row.fields[c], v)) {
        throw DataError("line " + std::to_string(row.line) +
                        ": non-numeric feature value '" + row.fields[c] + "'");
      }
      sample.push_back(v);
    }
    const std::string& label = row.fields[label_col];
    auto [it, inserted] =
        class_ids.try_emplace(label, static_cast<int>(ds.class_names.size()));
    if (inserted) ds.class_names.push_back(label);
    ds.labels.push_back(it->second);
    values.push_back(std::move(sample));
  }

  ds.class_count = static_cast<int>(ds.class_names.size());
  ds.features.resize(static_cast<Eigen::Index>(values.size()), feature_count);
  for (std::size_t r = 0; r < values.size(); ++r) {
    for (Eigen::Index c = 0; c < feature_count; ++c) {
      ds.features(static_cast<Eigen::Index>(r), c) =
          values[r][static_cast<std::size_t>(c)];
    }
  }
  ds.Validate();
  return ds;
}

Dataset Normalize(const Dataset& ds) {
  Dataset out = ds;
  for (Eigen::Index c = 0; c < out.features.cols(); ++c) {
    auto column = out.features.col(c);
    if (column.size() == 0) continue;
    const double lo = column.minCoeff();
    const double hi = column.maxCoeff();
    if (hi > lo) {
      column = (column.array() - lo) / (hi - lo);
    } else {
      column.setZero();
    }
  }
  return out;
}

TrainTestSplit Split(const Dataset& ds, double test_fraction,
                     std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must lie in (0, 1)");
  }
  std::vector<std::vector<std::size_t>> by_class(
      static_cast<std::size_t>(ds.class_count));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);
  }

  TrainTestSplit split;
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    std::vector<std::size_t>& members = by_class[c];
    if (members.size() < 2) {
      throw DataError("class '" +
                      (c < ds.class_names.size() ? ds.class_names[c]
                                                 : std::to_string(c)) +
                      "' has fewer than 2 samples");
    }
    std::shuffle(members.begin(), members.end(), rng);
    const auto test_count = static_cast<std::size_t>(
        std::lround(static_cast<double>(members.size()) * test_fraction));
    split.test_indices.insert(split.test_indices.end(), members.begin(),
                              members.begin() + static_cast<long>(test_count));
    split.train_indices.insert(split.train_indices.end(),
                               members.begin() + static_cast<long>(test_count),
                               members.end());
  }
  std::sort(split.train_indices.begin(), split.train_indices.end());
  std::sort(split.test_indices.begin(), split.test_indices.end());
  split.train = ds.Subset(split.train_indices);
  split.test = ds.Subset(split.test_indices);
  return split;
}

Dataset XorFixture() {
  Dataset ds;
  ds.name = "xor";
  ds.features.resize(4, 2);
  ds.features << 0, 0, 0, 1, 1, 0, 1, 1;
  ds.labels = {0, 1, 1, 0};
  ds.class_count = 2;
  ds.class_names = {"0", "1"};
  ds.feature_names = {"a", "b"};
  return ds;
}

}  // namespace ipte::data
