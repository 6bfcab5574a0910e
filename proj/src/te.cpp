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

#include "ipte/te.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ipte/error.hpp"

namespace ipte::te {

namespace {

// Packs the `order` bits ending at t, most recent bit lowest.
std::uint32_t HistoryState(BitSpan series, std::size_t t, int order) {
  std::uint32_t state = 0;
  for (int d = 0; d < order; ++d) {
    state |= static_cast<std::uint32_t>(series[t - d]) << d;
  }
  return state;
}

void CheckInputs(BitSpan target, BitSpan source, const HistoryOrder& order) {
  order.Validate();
  if (target.size() != source.size()) {
    throw DataError("series length mismatch");
  }
  if (target.size() <= static_cast<std::size_t>(order.span())) {
    throw DataError("series too short");
  }
  auto non_binary = [](Bit b) { return b > 1; };
  if (std::any_of(target.begin(), target.end(), non_binary) ||
      std::any_of(source.begin(), source.end(), non_binary)) {
    throw DataError("non-binary value in series");
  }
}

// Per-series encoding reused across every pair that shares a row.
struct TargetCoding {
  std::vector<Bit> next;
  std::vector<std::uint32_t> state;
};

TargetCoding EncodeTarget(BitSpan target, const HistoryOrder& order) {
  TargetCoding coding;
  const std::size_t first = static_cast<std::size_t>(order.span()) - 1;
  for (std::size_t t = first; t + 1 < target.size(); ++t) {
    coding.next.push_back(target[t + 1]);
    coding.state.push_back(HistoryState(target, t, order.target));
  }
  return coding;
}

std::vector<std::uint32_t> EncodeSource(BitSpan source,
                                        const HistoryOrder& order) {
  std::vector<std::uint32_t> states;
  const std::size_t first = static_cast<std::size_t>(order.span()) - 1;
  for (std::size_t t = first; t + 1 < source.size(); ++t) {
    states.push_back(HistoryState(source, t, order.source));
  }
  return states;
}

}  // namespace

void HistoryOrder::Validate() const {
  if (target < 1 || source < 1) {
    throw ConfigError("history orders must be >= 1");
  }
  if (target + source > kMaxCombined) {
    throw ConfigError("history order too large (k + l must be <= " +
                      std::to_string(kMaxCombined) + ")");
  }
}

JointCounts::JointCounts(HistoryOrder order) : order_(order) {
  order_.Validate();
  counts_.assign(std::size_t{2} << (order_.target + order_.source), 0);
}

std::uint64_t JointCounts::TargetPairCount(int next,
                                           std::uint32_t target_state) const {
  std::uint64_t sum = 0;
  for (std::uint32_t s = 0; s < source_states(); ++s) {
    sum += count(next, target_state, s);
  }
  return sum;
}

JointCounts CountJoint(BitSpan target, BitSpan source, HistoryOrder order) {
  CheckInputs(target, source, order);
  JointCounts counts(order);
  const std::size_t first = static_cast<std::size_t>(order.span()) - 1;
  for (std::size_t t = first; t + 1 < target.size(); ++t) {
    counts.Add(target[t + 1], HistoryState(target, t, order.target),
               HistoryState(source, t, order.source));
  }
  return counts;
}

double TransferEntropyFromCounts(const JointCounts& counts) {
  const std::uint64_t total = counts.total();
  if (total == 0) return 0.0;

  const std::uint32_t target_states = counts.target_states();
  const std::uint32_t source_states = counts.source_states();

  // Marginals c(x, a) and c(a).
  std::vector<std::uint64_t> next_and_target(2 * target_states, 0);
  std::vector<std::uint64_t> target_only(target_states, 0);
  for (std::uint32_t a = 0; a < target_states; ++a) {
    for (int x = 0; x < 2; ++x) {
      const std::uint64_t c = counts.TargetPairCount(x, a);
      next_and_target[2 * a + x] = c;
      target_only[a] += c;
    }
  }

  // p(x,a,b) log2[ p(x|a,b) / p(x|a) ] = c/N log2[ c c(a) / (c(a,b) c(x,a)) ].
  // The ratio is formed from integer products, so it is exactly 1 whenever
  // the source history carries no information about the next target bit.
  double value = 0.0;
  for (std::uint32_t a = 0; a < target_states; ++a) {
    for (std::uint32_t b = 0; b < source_states; ++b) {
      const std::uint64_t c0 = counts.count(0, a, b);
      const std::uint64_t c1 = counts.count(1, a, b);
      const std::uint64_t with_source = c0 + c1;
      if (with_source == 0) continue;
      for (int x = 0; x < 2; ++x) {
        const std::uint64_t c = x == 0 ? c0 : c1;
        if (c == 0) continue;
        const double numerator =
            static_cast<double>(c) * static_cast<double>(target_only[a]);
        const double denominator = static_cast<double>(with_source) *
                                   static_cast<double>(next_and_target[2 * a + x]);
        value += static_cast<double>(c) * std::log2(numerator / denominator);
      }
    }
  }
  value /= static_cast<double>(total);
  // A conditional mutual information; clamp rounding noise below zero.
  return value > 0.0 ? value : 0.0;
}

TeResult TransferEntropy(BitSpan target, BitSpan source, HistoryOrder order) {
  const JointCounts counts = CountJoint(target, source, order);
  return {TransferEntropyFromCounts(counts),
          static_cast<std::size_t>(counts.total())};
}

LayerPairTe LayerPairTransferEntropy(const BinaryMatrix& source_layer,
                                     const BinaryMatrix& target_layer,
                                     HistoryOrder order) {
  order.Validate();
  if (source_layer.rows() == 0 || target_layer.rows() == 0) {
    throw DataError("empty layer");
  }
  if (source_layer.cols() != target_layer.cols()) {
    throw DataError("layer step counts differ");
  }
  if (source_layer.cols() <= static_cast<std::size_t>(order.span())) {
    throw DataError("series too short");
  }

  LayerPairTe out;
  out.source_count = source_layer.rows();
  out.target_count = target_layer.rows();
  out.values.resize(out.source_count * out.target_count);

  std::vector<TargetCoding> targets;
  targets.reserve(out.target_count);
  for (std::size_t b = 0; b < out.target_count; ++b) {
    targets.push_back(EncodeTarget(target_layer.row(b), order));
  }

  JointCounts counts(order);
  for (std::size_t a = 0; a < out.source_count; ++a) {
    const std::vector<std::uint32_t> source_states =
        EncodeSource(source_layer.row(a), order);
    for (std::size_t b = 0; b < out.target_count; ++b) {
      const TargetCoding& coding = targets[b];
      counts = JointCounts(order);
      for (std::size_t i = 0; i < coding.next.size(); ++i) {
        counts.Add(coding.next[i], coding.state[i], source_states[i]);
      }
      out.values[a * out.target_count + b] = {
          TransferEntropyFromCounts(counts),
          static_cast<std::size_t>(counts.total())};
    }
  }

  double sum = 0.0;
  for (const TeResult& r : out.values) sum += r.value;
  out.mean = sum / static_cast<double>(out.values.size());
  return out;
}

}  // namespace ipte::te
