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

#ifndef IPTE_ANALYSIS_HPP_
#define IPTE_ANALYSIS_HPP_

#include <map>
#include <span>
#include <string>
#include <vector>

namespace ipte::analysis {

// One windowed layer-pair measurement. pair_id 0 is input -> first hidden,
// the largest id is last hidden -> output.
struct TeRecord {
  std::string run_id;
  int epoch = 0;
  int window_index = 0;
  int pair_id = 0;
  double te_mean = 0.0;  // bits
  int pair_count = 0;    // neuron pairs averaged into te_mean

  friend bool operator==(const TeRecord&, const TeRecord&) = default;
};

struct CurvePoint {
  int window_index = 0;
  double value = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};
using Curve = std::vector<CurvePoint>;

struct AggregatedCurve {
  int pair_id = 0;
  Curve points;
  bool normalized = false;
};

struct IpPoint {
  int epoch = 0;
  double x = 0.0;  // input-pair mean TE
  double y = 0.0;  // output-pair mean TE
};

// Number of layer pairs in a record set (largest pair_id + 1).
int PairCount(std::span<const TeRecord> records);

// "TE input", "TE hidden" (numbered when there are several), "TE output".
std::string PairLabel(int pair_id, int pair_count);

// Window-ordered curve per epoch for one pair, keeping epochs whose offset
// from the first epoch is a multiple of `stride`. Empty input gives an empty
// map; a pair_id absent from non-empty input throws DataError.
std::map<int, Curve> PerEpochCurves(std::span<const TeRecord> records,
                                    int pair_id, int stride = 1);

// Mean over epochs at each window index present in every epoch.
AggregatedCurve AverageAcrossEpochs(std::span<const TeRecord> records,
                                    int pair_id);

// Min-max scaling onto [0, 1]; a constant curve maps to zeros.
AggregatedCurve NormalizeCurve(AggregatedCurve curve);

// Per-epoch curves laid end to end; x counts windows across epochs.
std::vector<std::pair<double, double>> StackedCurve(
    std::span<const TeRecord> records, int pair_id);

// Mean te_mean over the windows of each epoch, keyed by epoch.
std::map<int, double> PerEpochMean(std::span<const TeRecord> records,
                                   int pair_id);

// (epoch, input-pair mean, output-pair mean) for every epoch that has both.
// Throws DataError "no IP coordinates" when fewer than two pairs exist.
std::vector<IpPoint> IpTrajectory(std::span<const TeRecord> records);

// Pearson correlation. Throws DataError for unequal lengths, fewer than three
// points, or "undefined correlation" when either series is constant.
double Correlate(std::span<const double> a, std::span<const double> b);

}  // namespace ipte::analysis

#endif  // IPTE_ANALYSIS_HPP_
