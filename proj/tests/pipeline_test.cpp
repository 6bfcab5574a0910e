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

#include <gtest/gtest.h>

#include <random>

#include "ipte/error.hpp"
#include "support/oracle.hpp"

namespace ipte {
namespace {

using capture::ActivationRecord;

// Two 1-neuron layers whose activations are the given bits.
io::Trace BitTrace(const testing::Bits& source, const testing::Bits& target,
                   capture::CapturePolicy policy) {
  io::Trace t;
  t.header.run_id = "bits";
  t.header.layer_widths = {1, 1};
  t.header.capture = policy;
  for (std::size_t s = 0; s < source.size(); ++s) {
    t.records.push_back({0, std::int64_t(s), 0, {double(source[s])}});
    t.records.push_back({0, std::int64_t(s), 1, {double(target[s])}});
  }
  return t;
}

// Median threshold: with half or fewer ones the cut falls on 0, so the
// binarized series equals the input bits.
capture::CapturePolicy BitPolicy(capture::WindowMode window) {
  capture::CapturePolicy p;
  p.percentile = 50.0;
  p.warmup = capture::WarmupCount{0};
  p.window = window;
  return p;
}

TEST(AnalyzeTraceTest, WorkedPairThroughTheFullPath) {
  const testing::Bits target = {0, 0, 1, 1, 0, 1, 0, 1};
  const testing::Bits source = {1, 0, 1, 1, 0, 0, 1, 0};
  const auto records =
      AnalyzeTrace(BitTrace(source, target, BitPolicy(capture::Sliding{8})));
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].pair_count, 1);
  EXPECT_NEAR(records[0].te_mean, double(testing::OracleTe(target, source)), 1e-12);
  EXPECT_NEAR(records[0].te_mean, 2.0 / 7.0, 1e-12);
}

TEST(AnalyzeTraceTest, CumulativeWindowsOverTenSteps) {
  std::mt19937_64 rng(6);
  io::Trace t;
  t.header.run_id = "cum";
  t.header.layer_widths = {3, 2};
  t.header.capture.warmup = capture::WarmupCount{0};
  std::normal_distribution<double> g;
  for (std::int64_t s = 0; s < 10; ++s) {
    t.records.push_back({0, s, 0, {g(rng), g(rng), g(rng)}});
    t.records.push_back({0, s, 1, {g(rng), g(rng)}});
  }
  const auto records = AnalyzeTrace(t);
  ASSERT_EQ(records.size(), 9u);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i].window_index, int(i));
    EXPECT_EQ(records[i].pair_count, 6);
    EXPECT_EQ(records[i].run_id, "cum");
  }
}

TEST(AnalyzeTraceTest, OrderingAndPairSelection) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u;
  io::Trace t;
  t.header.run_id = "multi";
  t.header.layer_widths = {2, 3, 2, 2};
  t.header.capture = BitPolicy(capture::Sliding{5});
  t.header.capture.percentile = 80.0;
  for (int e = 0; e < 3; ++e) {
    for (std::int64_t s = 0; s < 20; ++s) {
      for (int l = 0; l < 4; ++l) {
        ActivationRecord r{e, s, l, {}};
        for (int i = 0; i < t.header.layer_widths[std::size_t(l)]; ++i) r.act.push_back(u(rng));
        t.records.push_back(r);
      }
    }
  }
  const auto all = AnalyzeTrace(t);
  ASSERT_EQ(all.size(), 3u * 4u * 3u);
  for (std::size_t i = 1; i < all.size(); ++i) {
    const auto key = [](const analysis::TeRecord& r) {
      return std::make_tuple(r.epoch, r.window_index, r.pair_id);
    };
    EXPECT_LT(key(all[i - 1]), key(all[i]));
  }
  AnalyzeOptions only_last;
  only_last.pairs = {2};
  only_last.epoch_limit = 2;
  const auto last = AnalyzeTrace(t, only_last);
  ASSERT_EQ(last.size(), 2u * 4u);
  for (const auto& r : last) {
    EXPECT_EQ(r.pair_id, 2);
    EXPECT_EQ(r.pair_count, 4);
  }
  AnalyzeOptions bad;
  bad.pairs = {3};
  EXPECT_THROW(AnalyzeTrace(t, bad), ConfigError);
}

TEST(AnalyzeTraceTest, EpochThresholdScope) {
  // With an epoch-wide threshold a quiet window binarizes to zeros.
  io::Trace t;
  t.header.run_id = "scope";
  t.header.layer_widths = {1, 1};
  t.header.capture = BitPolicy(capture::Sliding{4});
  t.header.capture.percentile = 60.0;
  const double source[] = {0.1, 0.2, 0.1, 0.3, 5, 9, 5, 9};
  const double target[] = {0.3, 0.1, 0.2, 0.1, 5, 9, 9, 5};
  for (std::int64_t s = 0; s < 8; ++s) {
    t.records.push_back({0, s, 0, {source[s]}});
    t.records.push_back({0, s, 1, {target[s]}});
  }
  const auto per_window = AnalyzeTrace(t);
  t.header.capture.threshold_scope = capture::ThresholdScope::kEpoch;
  const auto per_epoch = AnalyzeTrace(t);
  ASSERT_EQ(per_window.size(), 2u);
  ASSERT_EQ(per_epoch.size(), 2u);
  EXPECT_EQ(per_epoch[0].te_mean, 0.0);
  // Window 1 at the epoch cut (5): source 0101, target 0110.
  EXPECT_NEAR(per_epoch[1].te_mean, double(testing::OracleTe({0, 1, 1, 0}, {0, 1, 0, 1})), 1e-12);
  EXPECT_GT(per_epoch[1].te_mean, 0.0);
  // Per window: 0001 -> 1000 in window 0; window 1's own cut is its maximum,
  // so both of its series are all zeros.
  EXPECT_NEAR(per_window[0].te_mean, double(testing::OracleTe({1, 0, 0, 0}, {0, 0, 0, 1})), 1e-12);
  EXPECT_EQ(per_window[1].te_mean, 0.0);
}

TEST(AnalyzeTraceTest, Errors) {
  io::Trace t = BitTrace({0, 1, 0, 1}, {1, 0, 1, 0}, BitPolicy(capture::Sliding{2}));
  AnalyzeOptions deep;
  deep.order = te::HistoryOrder{20, 1};
  EXPECT_THROW(AnalyzeTrace(t, deep), ConfigError);
  // Layer 1 misses a step that layer 0 has.
  t.records.erase(t.records.begin() + 3);
  EXPECT_THROW(AnalyzeTrace(t), DataError);
  std::erase_if(t.records, [](const ActivationRecord& r) { return r.layer == 1; });
  EXPECT_THROW(AnalyzeTrace(t), DataError);
}

TEST(AnalyzeTraceTest, WarmupDropsLeadingSteps) {
  io::Trace t = BitTrace({0, 1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1}, {1, 0, 1, 0, 0, 1, 1, 0, 1, 0, 0, 0},
                         BitPolicy(capture::CumulativeEpoch{}));
  t.header.capture.warmup = capture::WarmupCount{4};
  EXPECT_EQ(AnalyzeTrace(t).size(), 7u);
  t.header.capture.warmup = capture::WarmupFraction{0.5};
  EXPECT_EQ(AnalyzeTrace(t).size(), 5u);
}

}  // namespace
}  // namespace ipte
