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

#include "ipte/binary_matrix.hpp"

#include <string>
#include <utility>

#include "ipte/error.hpp"

namespace ipte {

namespace {

void RequireBits(const std::vector<Bit>& bits) {
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) {
      throw DataError("non-binary value at position " + std::to_string(i));
    }
  }
}

}  // namespace

BinarySeries::BinarySeries(std::vector<Bit> bits) : bits_(std::move(bits)) {
  RequireBits(bits_);
}

BinaryMatrix::BinaryMatrix(std::size_t rows, std::size_t cols,
                           std::vector<Bit> bits, double threshold_used)
    : rows_(rows),
      cols_(cols),
      bits_(std::move(bits)),
      threshold_used_(threshold_used) {
  if (bits_.size() != rows_ * cols_) {
    throw DataError("binary matrix size does not match its shape");
  }
  RequireBits(bits_);
}

}  // namespace ipte
