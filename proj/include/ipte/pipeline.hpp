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

#ifndef IPTE_PIPELINE_HPP_
#define IPTE_PIPELINE_HPP_

#include <optional>
#include <set>
#include <vector>

#include "ipte/analysis.hpp"
#include "ipte/te.hpp"
#include "ipte/trace.hpp"

namespace ipte {

struct AnalyzeOptions {
  te::HistoryOrder order;
  // Restrict to these pair ids; empty means every pair.
  std::set<int> pairs;
  // Only analyze epochs below this bound.
  std::optional<int> epoch_limit;
};

// Layers present in the trace, ascending. Pair p joins layers[p] and
// layers[p + 1].
std::vector<int> AnalyzableLayers(const io::Trace& trace);

// Windows every epoch per the trace's capture policy, binarizes both layers
// of each adjacent pair and records their mean pairwise TE. Output is ordered
// by (epoch, window_index, pair_id). Throws DataError when the trace has
// fewer than two layers or paired layers disagree on their steps.
std::vector<analysis::TeRecord> AnalyzeTrace(const io::Trace& trace,
                                             const AnalyzeOptions& options = {});

}  // namespace ipte

#endif  // IPTE_PIPELINE_HPP_
