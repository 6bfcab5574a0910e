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

#ifndef IPTE_CLI_HPP_
#define IPTE_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ipte/data.hpp"
#include "ipte/nn.hpp"
#include "ipte/te.hpp"

namespace ipte::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitDivergence = 3;

struct DatasetConfig {
  std::string path;     // as written in the config; empty when a fixture
  std::string fixture;  // "xor"; empty when a path
  data::CsvSchema schema;
  double test_fraction = 0.2;  // 0 evaluates on the training set
  bool normalize = true;
};

// JSON run description:
// {
//   "run_id": "iris",
//   "dataset": {"path": "iris.csv", "schema": {"has_header": true,
//               "label_column": "species"}, "test_fraction": 0.2},
//   "model": {"layer_widths": [4, 8, 16, 8, 3], "hidden_activation": "tanh"},
//   "train": {"learning_rate": 0.05, "epochs": 200, "seed": 7,
//             "shuffle_each_epoch": true, "capture": {...}},
//   "te": {"k": 1, "l": 1},
//   "output_dir": "out/iris"
// }
// "model" may instead give "hidden_widths"; with neither, one hidden layer of
// DefaultHiddenWidth(input) is used. Relative paths resolve against the
// config file's directory.
struct RunConfig {
  std::string run_id = "run";
  DatasetConfig dataset;
  std::vector<int> layer_widths;   // full widths, or empty until resolved
  std::vector<int> hidden_widths;  // used when layer_widths is empty
  nn::Activation hidden_activation = nn::Activation::kTanh;
  nn::TrainConfig train;
  te::HistoryOrder te;
  std::string output_dir;
  std::filesystem::path base_dir;  // not serialized
};

// Throws ConfigError for missing or invalid fields (the seed is mandatory)
// and for a dataset path that does not exist.
RunConfig ParseRunConfig(const nlohmann::json& j,
                         const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Resolved configuration as written next to the run outputs.
nlohmann::ordered_json ToJson(const RunConfig& config);

struct PreparedRun {
  RunConfig config;  // layer_widths filled in
  data::TrainTestSplit split;
  nn::MlpSpec spec;
};

// Loads and splits the dataset and fixes the architecture.
PreparedRun PrepareRun(RunConfig config);

// Writes trace.jsonl, metrics.csv and config.json into `out_dir` (created if
// needed). On failure nothing written by this call is left behind.
void CmdTrain(const std::filesystem::path& config_path,
              const std::filesystem::path& out_dir);

void CmdAnalyze(const std::filesystem::path& trace_path, te::HistoryOrder order,
                const std::filesystem::path& out_path);

struct PlotRequest {
  std::filesystem::path results;
  std::string mode = "averaged";  // per-epoch | averaged | stacked | ip
  std::optional<int> pair;
  int stride = 1;
  bool log_y = false;
  bool normalize = false;
  std::filesystem::path out;
  std::string title;
};

void CmdPlot(const PlotRequest& request);

// Entry point for the ipte binary. Never throws; returns an exit code.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace ipte::cli

#endif  // IPTE_CLI_HPP_
