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

#ifndef IPTE_BINARY_MATRIX_HPP_
#define IPTE_BINARY_MATRIX_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ipte {

using Bit = std::uint8_t;
using BitSpan = std::span<const Bit>;

// Time-indexed 0/1 observations for one neuron.
class BinarySeries {
 public:
  BinarySeries() = default;
  // Throws DataError if any element is not 0 or 1.
  explicit BinarySeries(std::vector<Bit> bits);

  BitSpan bits() const { return bits_; }
  std::size_t size() const { return bits_.size(); }
  Bit operator[](std::size_t t) const { return bits_[t]; }

 private:
  std::vector<Bit> bits_;
};

// Neurons x steps matrix of bits, stored row-major. threshold_used records the
// activation cut that produced it (zero when built directly from bits).
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(std::size_t rows, std::size_t cols, std::vector<Bit> bits,
               double threshold_used = 0.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double threshold_used() const { return threshold_used_; }
  Bit at(std::size_t r, std::size_t c) const { return bits_[r * cols_ + c]; }
  BitSpan row(std::size_t r) const {
    return BitSpan(bits_).subspan(r * cols_, cols_);
  }
  const std::vector<Bit>& data() const { return bits_; }

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Bit> bits_;
  double threshold_used_ = 0.0;
};

}  // namespace ipte

#endif  // IPTE_BINARY_MATRIX_HPP_
