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

#ifndef IPTE_RESULTS_HPP_
#define IPTE_RESULTS_HPP_

// Result CSV: header "run_id,epoch,window_index,pair_id,te_mean,pair_count",
// one TeRecord per row, reals printed with 12 significant digits.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ipte/analysis.hpp"

namespace ipte::io {

inline constexpr const char* kResultsHeader =
    "run_id,epoch,window_index,pair_id,te_mean,pair_count";

// printf("%.12g") of v.
std::string FormatReal(double v);

void WriteResults(std::ostream& out,
                  std::span<const analysis::TeRecord> records);
void WriteResults(const std::filesystem::path& path,
                  std::span<const analysis::TeRecord> records);

// Throws DataError naming the line of the first malformed row.
std::vector<analysis::TeRecord> ReadResults(std::istream& in);
std::vector<analysis::TeRecord> ReadResults(const std::filesystem::path& path);

}  // namespace ipte::io

#endif  // IPTE_RESULTS_HPP_
