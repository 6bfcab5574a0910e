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

#include "ipte/capture.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ipte/error.hpp"

namespace ipte::capture {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Post-warm-up slice of `records`, after checking step order and widths.
std::span<const ActivationRecord> KeptRecords(
    std::span<const ActivationRecord> records, const CapturePolicy& policy,
    std::optional<std::int64_t> epoch_length) {
  if (records.empty()) return {};
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].step <= records[i - 1].step) {
      throw DataError("activation records are not strictly ordered by step");
    }
    if (records[i].act.size() != records[0].act.size()) {
      throw DataError("activation width changes within a layer");
    }
  }
  const std::int64_t length = epoch_length.value_or(records.back().step + 1);
  const std::int64_t cutoff = policy.WarmupCutoff(length);
  const auto first = std::find_if(
      records.begin(), records.end(),
      [cutoff](const ActivationRecord& r) { return r.step >= cutoff; });
  return records.subspan(static_cast<std::size_t>(first - records.begin()));
}

ActivationWindow MakeWindow(std::span<const ActivationRecord> steps,
                            int window_index) {
  ActivationWindow window;
  window.layer_id = steps.front().layer;
  window.epoch = steps.front().epoch;
  window.window_index = window_index;
  const auto neurons = static_cast<Eigen::Index>(steps.front().act.size());
  window.matrix.resize(neurons, static_cast<Eigen::Index>(steps.size()));
  window.step_ids.reserve(steps.size());
  for (std::size_t c = 0; c < steps.size(); ++c) {
    for (Eigen::Index r = 0; r < neurons; ++r) {
      window.matrix(r, static_cast<Eigen::Index>(c)) =
          steps[c].act[static_cast<std::size_t>(r)];
    }
    window.step_ids.push_back(steps[c].step);
  }
  return window;
}

}  // namespace

void CapturePolicy::Validate() const {
  if (!(percentile > 0.0 && percentile < 100.0)) {
    throw ConfigError("percentile must lie in (0, 100)");
  }
  std::visit(Overloaded{
                 [](const WarmupFraction& w) {
                   if (!(w.fraction >= 0.0 && w.fraction < 1.0)) {
                     throw ConfigError("warm-up fraction must lie in [0, 1)");
                   }
                 },
                 [](const WarmupCount& w) {
                   if (w.count < 0) {
                     throw ConfigError("warm-up count must be >= 0");
                   }
                 },
             },
             warmup);
  std::visit(Overloaded{
                 [](const CumulativeEpoch&) {},
                 [](const Sliding& s) {
                   if (s.size < 2) throw ConfigError("sliding window must be >= 2");
                 },
                 [](const PerBatch& b) {
                   if (b.size < 2) throw ConfigError("batch size must be >= 2");
                 },
             },
             window);
}

std::int64_t CapturePolicy::WarmupCutoff(std::int64_t epoch_length) const {
  return std::visit(
      Overloaded{
          [epoch_length](const WarmupFraction& w) {
            // The epsilon absorbs representation error, e.g. 0.29 * 100.
            return static_cast<std::int64_t>(
                std::floor(w.fraction * static_cast<double>(epoch_length) + 1e-9));
          },
          [](const WarmupCount& w) { return w.count; },
      },
      warmup);
}

double PercentileThreshold(std::span<const double> values, double p) {
  if (values.empty()) throw DataError("percentile of an empty matrix");
  if (!(p > 0.0 && p < 100.0)) {
    throw ConfigError("percentile must lie in (0, 100)");
  }
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
  return sorted[rank - 1];
}

double PercentileThreshold(const Eigen::MatrixXd& matrix, double p) {
  return PercentileThreshold(
      std::span<const double>(matrix.data(), static_cast<std::size_t>(matrix.size())),
      p);
}

BinaryMatrix BinarizeAt(const Eigen::MatrixXd& matrix, double threshold) {
  const auto rows = static_cast<std::size_t>(matrix.rows());
  const auto cols = static_cast<std::size_t>(matrix.cols());
  std::vector<Bit> bits(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      bits[r * cols + c] =
          matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) >
                  threshold
              ? 1
              : 0;
    }
  }
  return BinaryMatrix(rows, cols, std::move(bits), threshold);
}

BinaryMatrix Binarize(const ActivationWindow& window,
                      const CapturePolicy& policy) {
  return BinarizeAt(window.matrix,
                    PercentileThreshold(window.matrix, policy.percentile));
}

std::vector<ActivationWindow> WindowsForEpoch(
    std::span<const ActivationRecord> records, const CapturePolicy& policy,
    std::optional<std::int64_t> epoch_length) {
  policy.Validate();
  const std::span<const ActivationRecord> kept =
      KeptRecords(records, policy, epoch_length);
  std::vector<ActivationWindow> windows;
  if (kept.size() < 2) return windows;

  std::visit(
      Overloaded{
          [&](const CumulativeEpoch&) {
            for (std::size_t end = 2; end <= kept.size(); ++end) {
              windows.push_back(MakeWindow(kept.first(end),
                                           static_cast<int>(windows.size())));
            }
          },
          [&](const Sliding& s) {
            const auto size = static_cast<std::size_t>(s.size);
            for (std::size_t begin = 0; begin + size <= kept.size();
                 begin += size) {
              windows.push_back(MakeWindow(kept.subspan(begin, size),
                                           static_cast<int>(windows.size())));
            }
          },
          [&](const PerBatch& b) {
            std::size_t begin = 0;
            while (begin < kept.size()) {
              const std::int64_t batch = kept[begin].step / b.size;
              std::size_t end = begin;
              while (end < kept.size() && kept[end].step / b.size == batch) ++end;
              if (end - begin >= 2) {
                windows.push_back(MakeWindow(kept.subspan(begin, end - begin),
                                             static_cast<int>(windows.size())));
              }
              begin = end;
            }
          },
      },
      policy.window);
  return windows;
}

double EpochThreshold(std::span<const ActivationRecord> records,
                      const CapturePolicy& policy,
                      std::optional<std::int64_t> epoch_length) {
  const std::span<const ActivationRecord> kept =
      KeptRecords(records, policy, epoch_length);
  std::vector<double> values;
  for (const ActivationRecord& r : kept) {
    values.insert(values.end(), r.act.begin(), r.act.end());
  }
  return PercentileThreshold(values, policy.percentile);
}

ActivationRecorder::ActivationRecorder(CapturePolicy policy)
    : policy_(std::move(policy)) {
  policy_.Validate();
}

void ActivationRecorder::BeginEpoch(int /*epoch*/, std::int64_t epoch_length) {
  cutoff_ = policy_.WarmupCutoff(epoch_length);
}

void ActivationRecorder::Record(int epoch, std::int64_t step,
                                std::span<const Eigen::VectorXd> layers) {
  if (step < cutoff_) return;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Eigen::VectorXd& a = layers[l];
    records_.push_back(ActivationRecord{
        epoch, step, static_cast<int>(l),
        std::vector<double>(a.data(), a.data() + a.size())});
  }
}

}  // namespace ipte::capture
