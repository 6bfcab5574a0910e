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

#include "ipte/pipeline.hpp"

#include <algorithm>
#include <map>

#include "ipte/capture.hpp"
#include "ipte/error.hpp"

namespace ipte {

namespace {

using capture::ActivationRecord;

struct LayerWindows {
  std::vector<BinaryMatrix> bits;
  std::vector<std::vector<std::int64_t>> step_ids;
};

LayerWindows BinarizedWindows(std::span<const ActivationRecord> records,
                              const capture::CapturePolicy& policy,
                              std::int64_t epoch_length) {
  LayerWindows out;
  const std::vector<capture::ActivationWindow> windows =
      capture::WindowsForEpoch(records, policy, epoch_length);
  if (windows.empty()) return out;
  std::optional<double> epoch_threshold;
  if (policy.threshold_scope == capture::ThresholdScope::kEpoch) {
    epoch_threshold = capture::EpochThreshold(records, policy, epoch_length);
  }
  for (const capture::ActivationWindow& w : windows) {
    out.bits.push_back(epoch_threshold
                           ? capture::BinarizeAt(w.matrix, *epoch_threshold)
                           : capture::Binarize(w, policy));
    out.step_ids.push_back(w.step_ids);
  }
  return out;
}

}  // namespace

std::vector<int> AnalyzableLayers(const io::Trace& trace) {
  std::set<int> layers;
  for (const ActivationRecord& r : trace.records) layers.insert(r.layer);
  return {layers.begin(), layers.end()};
}

std::vector<analysis::TeRecord> AnalyzeTrace(const io::Trace& trace,
                                             const AnalyzeOptions& options) {
  options.order.Validate();
  const capture::CapturePolicy& policy = trace.header.capture;
  policy.Validate();
  const std::vector<int> layers = AnalyzableLayers(trace);
  if (layers.size() < 2) throw DataError("need at least one adjacent pair");
  const int pair_count = static_cast<int>(layers.size()) - 1;
  for (int p : options.pairs) {
    if (p < 0 || p >= pair_count) {
      throw ConfigError("pair " + std::to_string(p) + " not in trace");
    }
  }
  auto wanted = [&](int p) {
    return options.pairs.empty() || options.pairs.count(p) > 0;
  };

  // epoch -> layer -> records, preserving step order.
  std::map<int, std::map<int, std::vector<ActivationRecord>>> by_epoch;
  for (const ActivationRecord& r : trace.records) {
    if (options.epoch_limit && r.epoch >= *options.epoch_limit) continue;
    by_epoch[r.epoch][r.layer].push_back(r);
  }

  std::vector<analysis::TeRecord> out;
  for (const auto& [epoch, per_layer] : by_epoch) {
    std::int64_t epoch_length = 0;
    for (const auto& [layer, records] : per_layer) {
      epoch_length = std::max(epoch_length, records.back().step + 1);
    }

    std::map<int, LayerWindows> binarized;
    auto windows_of = [&](int layer) -> const LayerWindows& {
      auto it = binarized.find(layer);
      if (it == binarized.end()) {
        const auto found = per_layer.find(layer);
        const std::span<const ActivationRecord> records =
            found == per_layer.end() ? std::span<const ActivationRecord>()
                                     : std::span<const ActivationRecord>(found->second);
        it = binarized
                 .emplace(layer, BinarizedWindows(records, policy, epoch_length))
                 .first;
      }
      return it->second;
    };

    std::vector<std::vector<analysis::TeRecord>> per_pair(
        static_cast<std::size_t>(pair_count));
    std::size_t window_count = 0;
    for (int p = 0; p < pair_count; ++p) {
      if (!wanted(p)) continue;
      const LayerWindows& src = windows_of(layers[static_cast<std::size_t>(p)]);
      const LayerWindows& dst = windows_of(layers[static_cast<std::size_t>(p) + 1]);
      if (src.step_ids != dst.step_ids) {
        throw DataError("layers " + std::to_string(layers[static_cast<std::size_t>(p)]) +
                        " and " + std::to_string(layers[static_cast<std::size_t>(p) + 1]) +
                        " cover different steps in epoch " + std::to_string(epoch));
      }
      window_count = std::max(window_count, src.bits.size());
      for (std::size_t w = 0; w < src.bits.size(); ++w) {
        if (src.bits[w].cols() <= static_cast<std::size_t>(options.order.span())) {
          continue;  // too short for this embedding
        }
        const te::LayerPairTe pair =
            te::LayerPairTransferEntropy(src.bits[w], dst.bits[w], options.order);
        per_pair[static_cast<std::size_t>(p)].push_back(
            {trace.header.run_id, epoch, static_cast<int>(w), p, pair.mean,
             static_cast<int>(pair.values.size())});
      }
    }

    // Interleave into (window_index, pair_id) order.
    std::vector<std::size_t> cursor(per_pair.size(), 0);
    for (std::size_t w = 0; w < window_count; ++w) {
      for (std::size_t p = 0; p < per_pair.size(); ++p) {
        auto& list = per_pair[p];
        if (cursor[p] < list.size() &&
            list[cursor[p]].window_index == static_cast<int>(w)) {
          out.push_back(std::move(list[cursor[p]++]));
        }
      }
    }
  }
  return out;
}

}  // namespace ipte
