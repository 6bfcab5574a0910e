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

#ifndef IPTE_DATA_HPP_
#define IPTE_DATA_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace ipte::data {

// Tabular classification data. Rows of `features` are samples.
struct Dataset {
  std::string name;
  Eigen::MatrixXd features;
  std::vector<int> labels;
  int class_count = 0;
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;

  std::size_t size() const { return labels.size(); }
  int feature_count() const { return static_cast<int>(features.cols()); }

  // Throws DataError if labels are out of range, shapes disagree, or a
  // feature is not finite.
  void Validate() const;

  // Rows in the given order.
  Dataset Subset(std::span<const std::size_t> indices) const;
};

// Which CSV columns hold what. The label column is given by header name or
// by zero-based index; a negative index counts from the end (-1 = last).
struct CsvSchema {
  bool has_header = true;
  std::variant<int, std::string> label_column = -1;
  std::vector<std::string> ignore_columns;  // header names, header required
};

// Numeric features, categorical labels mapped to dense ids in order of first
// appearance. Throws DataError for a missing file, a malformed row (the
// message names the line) or "empty dataset".
Dataset LoadCsv(const std::filesystem::path& path, const CsvSchema& schema);

// Per-feature min-max scaling onto [0, 1]; constant features become 0.
Dataset Normalize(const Dataset& ds);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_indices;  // ascending
  std::vector<std::size_t> test_indices;   // ascending
};

// Stratified, seeded split. Each class contributes round(size * fraction)
// samples to the test set. Throws ConfigError unless 0 < test_fraction < 1
// and DataError if any class has fewer than two samples.
TrainTestSplit Split(const Dataset& ds, double test_fraction,
                     std::uint64_t seed);

// Built-in fixtures.
Dataset XorFixture();

}  // namespace ipte::data

#endif  // IPTE_DATA_HPP_
