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

#ifndef IPTE_TE_HPP_
#define IPTE_TE_HPP_

// Plug-in transfer entropy between binary time series.
//
// For a target series I and a source series J the estimator evaluates
//
//   TE(J -> I) = sum p(i[t+1], i_t^(k), j_t^(l))
//                    * log2( p(i[t+1] | i_t^(k), j_t^(l)) / p(i[t+1] | i_t^(k)) )
//
// over every observed triple, where i_t^(k) is the block of the last k target
// bits ending at t and j_t^(l) the last l source bits. Probabilities are
// empirical frequencies over the n - max(k, l) valid time steps.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ipte/binary_matrix.hpp"

namespace ipte::te {

// Embedding orders: k past target bits, l past source bits.
struct HistoryOrder {
  int target = 1;
  int source = 1;

  // Largest supported k + l; the joint table has 2^(k+l+1) cells.
  static constexpr int kMaxCombined = 20;

  // Throws ConfigError unless k >= 1, l >= 1 and k + l <= kMaxCombined.
  void Validate() const;
  int span() const { return target > source ? target : source; }
};

// Tally of (next target bit, target history, source history) triples.
// Histories are packed with the most recent bit in the lowest position.
class JointCounts {
 public:
  explicit JointCounts(HistoryOrder order);

  const HistoryOrder& order() const { return order_; }
  std::uint32_t target_states() const { return 1u << order_.target; }
  std::uint32_t source_states() const { return 1u << order_.source; }
  std::uint64_t total() const { return total_; }

  std::uint64_t count(int next, std::uint32_t target_state,
                      std::uint32_t source_state) const {
    return counts_[Index(next, target_state, source_state)];
  }
  void Add(int next, std::uint32_t target_state, std::uint32_t source_state) {
    ++counts_[Index(next, target_state, source_state)];
    ++total_;
  }

  // Sum over source histories: the (next, target history) pair count.
  std::uint64_t TargetPairCount(int next, std::uint32_t target_state) const;

 private:
  std::size_t Index(int next, std::uint32_t target_state,
                    std::uint32_t source_state) const {
    return ((static_cast<std::size_t>(target_state) << order_.source |
             source_state)
            << 1) |
           static_cast<std::size_t>(next);
  }

  HistoryOrder order_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct TeResult {
  double value = 0.0;  // bits
  std::size_t samples_used = 0;
};

// Builds the joint table. Throws DataError on "series length mismatch",
// "series too short" (n <= max(k, l)) or a non-binary element.
JointCounts CountJoint(BitSpan target, BitSpan source, HistoryOrder order);

// Plug-in estimate from an existing table.
double TransferEntropyFromCounts(const JointCounts& counts);

TeResult TransferEntropy(BitSpan target, BitSpan source,
                         HistoryOrder order = {});

inline TeResult TransferEntropy(const BinarySeries& target,
                                const BinarySeries& source,
                                HistoryOrder order = {}) {
  return TransferEntropy(target.bits(), source.bits(), order);
}

// TE from every source-layer neuron to every target-layer neuron.
struct LayerPairTe {
  std::size_t source_count = 0;
  std::size_t target_count = 0;
  std::vector<TeResult> values;  // row-major [source][target]
  double mean = 0.0;

  const TeResult& at(std::size_t source, std::size_t target) const {
    return values[source * target_count + target];
  }
};

// values[a][b] = TransferEntropy(target row b, source row a). The mean is
// accumulated in index order so the result is reproducible bit-for-bit.
LayerPairTe LayerPairTransferEntropy(const BinaryMatrix& source_layer,
                                     const BinaryMatrix& target_layer,
                                     HistoryOrder order = {});

}  // namespace ipte::te

#endif  // IPTE_TE_HPP_
