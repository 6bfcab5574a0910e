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

#include "ipte/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ipte/error.hpp"

namespace ipte::analysis {

namespace {

// Records of one pair grouped by epoch, each group sorted by window index.
std::map<int, Curve> GroupByEpoch(std::span<const TeRecord> records,
                                  int pair_id) {
  std::map<int, Curve> out;
  for (const TeRecord& r : records) {
    if (r.pair_id == pair_id) {
      out[r.epoch].push_back({r.window_index, r.te_mean});
    }
  }
  for (auto& [epoch, curve] : out) {
    std::stable_sort(curve.begin(), curve.end(),
                     [](const CurvePoint& a, const CurvePoint& b) {
                       return a.window_index < b.window_index;
                     });
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (curve[i].window_index == curve[i - 1].window_index) {
        throw DataError("duplicate window " +
                        std::to_string(curve[i].window_index) + " in epoch " +
                        std::to_string(epoch));
      }
    }
  }
  return out;
}

void RequirePair(std::span<const TeRecord> records, int pair_id) {
  const bool found =
      std::any_of(records.begin(), records.end(),
                  [pair_id](const TeRecord& r) { return r.pair_id == pair_id; });
  if (!found) throw DataError("unknown pair_id " + std::to_string(pair_id));
}

}  // namespace

int PairCount(std::span<const TeRecord> records) {
  int max_id = -1;
  for (const TeRecord& r : records) max_id = std::max(max_id, r.pair_id);
  return max_id + 1;
}

std::string PairLabel(int pair_id, int pair_count) {
  if (pair_id == 0) return "TE input";
  if (pair_id == pair_count - 1) return "TE output";
  if (pair_count == 3) return "TE hidden";
  return "TE hidden " + std::to_string(pair_id);
}

std::map<int, Curve> PerEpochCurves(std::span<const TeRecord> records,
                                    int pair_id, int stride) {
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (records.empty()) return {};
  RequirePair(records, pair_id);
  std::map<int, Curve> all = GroupByEpoch(records, pair_id);
  const int first = all.begin()->first;
  std::map<int, Curve> out;
  for (auto& [epoch, curve] : all) {
    if ((epoch - first) % stride == 0) out.emplace(epoch, std::move(curve));
  }
  return out;
}

AggregatedCurve AverageAcrossEpochs(std::span<const TeRecord> records,
                                    int pair_id) {
  AggregatedCurve result;
  result.pair_id = pair_id;
  const std::map<int, Curve> epochs = GroupByEpoch(records, pair_id);
  if (epochs.empty()) return result;

  std::map<int, std::pair<double, std::size_t>> sums;
  for (const auto& [epoch, curve] : epochs) {
    for (const CurvePoint& p : curve) {
      auto& [sum, n] = sums[p.window_index];
      sum += p.value;
      ++n;
    }
  }
  for (const auto& [window, acc] : sums) {
    if (acc.second == epochs.size()) {
      result.points.push_back(
          {window, acc.first / static_cast<double>(acc.second)});
    }
  }
  return result;
}

AggregatedCurve NormalizeCurve(AggregatedCurve curve) {
  if (!curve.points.empty()) {
    const auto [lo_it, hi_it] = std::minmax_element(
        curve.points.begin(), curve.points.end(),
        [](const CurvePoint& a, const CurvePoint& b) { return a.value < b.value; });
    const double lo = lo_it->value;
    const double hi = hi_it->value;
    for (CurvePoint& p : curve.points) {
      p.value = hi > lo ? (p.value - lo) / (hi - lo) : 0.0;
    }
  }
  curve.normalized = true;
  return curve;
}

std::vector<std::pair<double, double>> StackedCurve(
    std::span<const TeRecord> records, int pair_id) {
  std::vector<std::pair<double, double>> out;
  for (const auto& [epoch, curve] : GroupByEpoch(records, pair_id)) {
    for (const CurvePoint& p : curve) {
      out.emplace_back(static_cast<double>(out.size()), p.value);
    }
  }
  return out;
}

std::map<int, double> PerEpochMean(std::span<const TeRecord> records,
                                   int pair_id) {
  std::map<int, double> out;
  for (const auto& [epoch, curve] : GroupByEpoch(records, pair_id)) {
    double sum = 0.0;
    for (const CurvePoint& p : curve) sum += p.value;
    out[epoch] = sum / static_cast<double>(curve.size());
  }
  return out;
}

std::vector<IpPoint> IpTrajectory(std::span<const TeRecord> records) {
  std::set<int> pairs;
  for (const TeRecord& r : records) pairs.insert(r.pair_id);
  if (pairs.size() < 2) throw DataError("no IP coordinates");

  const std::map<int, double> input = PerEpochMean(records, *pairs.begin());
  const std::map<int, double> output = PerEpochMean(records, *pairs.rbegin());
  std::vector<IpPoint> out;
  for (const auto& [epoch, x] : input) {
    const auto it = output.find(epoch);
    if (it != output.end()) out.push_back({epoch, x, it->second});
  }
  return out;
}

double Correlate(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DataError("series lengths differ");
  if (a.size() < 3) throw DataError("correlation needs at least 3 points");
  const auto n = static_cast<double>(a.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) throw DataError("undefined correlation");
  return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

}  // namespace ipte::analysis
