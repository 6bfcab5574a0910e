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

#ifndef IPTE_CAPTURE_HPP_
#define IPTE_CAPTURE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ipte/binary_matrix.hpp"

namespace ipte::capture {

// Skip a fraction of each epoch's steps, rounded down.
struct WarmupFraction {
  double fraction = 0.05;
};
// Skip a fixed number of steps at the start of each epoch.
struct WarmupCount {
  std::int64_t count = 0;
};
using Warmup = std::variant<WarmupFraction, WarmupCount>;

// Growing prefix: one window per post-warm-up step, from 2 steps upwards.
struct CumulativeEpoch {};
// Non-overlapping chunks of `size` steps starting at the warm-up cutoff.
struct Sliding {
  std::int64_t size = 20;
};
// One window per training batch; batch b holds steps [b*size, (b+1)*size).
struct PerBatch {
  std::int64_t size = 32;
};
using WindowMode = std::variant<CumulativeEpoch, Sliding, PerBatch>;

enum class ThresholdScope { kWindow, kEpoch };

struct CapturePolicy {
  double percentile = 95.0;
  Warmup warmup = WarmupFraction{};
  WindowMode window = CumulativeEpoch{};
  ThresholdScope threshold_scope = ThresholdScope::kWindow;

  // Throws ConfigError when a field is out of range.
  void Validate() const;

  // First step index (within an epoch) that is kept.
  std::int64_t WarmupCutoff(std::int64_t epoch_length) const;
};

// One layer's activations at one step of one epoch. `step` is the position
// within the epoch (sample or batch index).
struct ActivationRecord {
  int epoch = 0;
  std::int64_t step = 0;
  int layer = 0;
  std::vector<double> act;

  friend bool operator==(const ActivationRecord&,
                         const ActivationRecord&) = default;
};

struct ActivationWindow {
  int layer_id = 0;
  int epoch = 0;
  int window_index = 0;
  Eigen::MatrixXd matrix;  // neurons x steps
  std::vector<std::int64_t> step_ids;
};

// Nearest-rank percentile of all values: the element at 1-based rank
// ceil(p/100 * N) of the ascending order. Throws DataError when empty and
// ConfigError unless 0 < p < 100.
double PercentileThreshold(std::span<const double> values, double p);
double PercentileThreshold(const Eigen::MatrixXd& matrix, double p);

// Entry is 1 iff the activation is strictly greater than `threshold`.
BinaryMatrix BinarizeAt(const Eigen::MatrixXd& matrix, double threshold);

// Thresholds the window at its own percentile.
BinaryMatrix Binarize(const ActivationWindow& window,
                      const CapturePolicy& policy);

// Splits one epoch of one layer into analysis windows. `records` must be
// ordered by step; warm-up steps are dropped first, judged by step index so
// that already-filtered traces are unaffected. `epoch_length` defaults to the
// largest step index + 1. Fewer than two usable steps yields no windows.
std::vector<ActivationWindow> WindowsForEpoch(
    std::span<const ActivationRecord> records, const CapturePolicy& policy,
    std::optional<std::int64_t> epoch_length = std::nullopt);

// Percentile over every post-warm-up activation of one epoch and layer, for
// ThresholdScope::kEpoch.
double EpochThreshold(std::span<const ActivationRecord> records,
                      const CapturePolicy& policy,
                      std::optional<std::int64_t> epoch_length = std::nullopt);

// Receives per-layer activations from the trainer, one call per step.
class ActivationSink {
 public:
  virtual ~ActivationSink() = default;
  virtual void BeginEpoch(int epoch, std::int64_t epoch_length) = 0;
  virtual void Record(int epoch, std::int64_t step,
                      std::span<const Eigen::VectorXd> layers) = 0;
};

// Keeps post-warm-up activations in memory, in arrival order.
class ActivationRecorder : public ActivationSink {
 public:
  explicit ActivationRecorder(CapturePolicy policy);

  void BeginEpoch(int epoch, std::int64_t epoch_length) override;
  void Record(int epoch, std::int64_t step,
              std::span<const Eigen::VectorXd> layers) override;

  const CapturePolicy& policy() const { return policy_; }
  const std::vector<ActivationRecord>& records() const { return records_; }
  std::vector<ActivationRecord> TakeRecords() { return std::move(records_); }

 private:
  CapturePolicy policy_;
  std::int64_t cutoff_ = 0;
  std::vector<ActivationRecord> records_;
};

}  // namespace ipte::capture

#endif  // IPTE_CAPTURE_HPP_
