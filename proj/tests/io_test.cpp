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

#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "ipte/error.hpp"
#include "ipte/pipeline.hpp"
#include "ipte/results.hpp"
#include "ipte/svg.hpp"
#include "ipte/trace.hpp"
#include "support/temp_dir.hpp"

namespace ipte::io {
namespace {

using analysis::TeRecord;
using capture::ActivationRecord;

const std::string kFixture = IPTE_SOURCE_DIR "/tests/fixtures/external_fc.jsonl";

Trace SmallTrace() {
  Trace t;
  t.header.run_id = "small";
  t.header.layer_widths = {2, 3};
  t.header.seed = 4;
  t.records = {{0, 0, 0, {0.5, -1.25}}, {0, 0, 1, {1e-300, 3.0, -0.0}}, {0, 1, 0, {2.0, 1.0 / 3.0}}};
  return t;
}

std::string Dump(const Trace& t) {
  std::ostringstream out;
  WriteTrace(out, t);
  return out.str();
}

std::string ReadError(const std::string& text) {
  std::istringstream in(text);
  try {
    ReadTrace(in);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

const std::string kHeader =
    "{\"format\":\"ipte-trace\",\"version\":1,\"run_id\":\"r\",\"layer_widths\":[2,1]}\n";

TEST(TraceTest, RoundTrip) {
  const Trace t = SmallTrace();
  std::istringstream in(Dump(t));
  const Trace back = ReadTrace(in);
  EXPECT_EQ(back.records, t.records);
  EXPECT_EQ(back.header.run_id, "small");
  EXPECT_EQ(back.header.layer_widths, t.header.layer_widths);
  EXPECT_EQ(back.header.seed, 4u);
  EXPECT_EQ(Dump(back), Dump(t));
}

TEST(TraceTest, PolicyJsonRoundTrip) {
  capture::CapturePolicy p;
  p.percentile = 90.0;
  p.warmup = capture::WarmupCount{10};
  p.window = capture::PerBatch{16};
  p.threshold_scope = capture::ThresholdScope::kEpoch;
  const capture::CapturePolicy back = PolicyFromJson(nlohmann::json::parse(PolicyToJson(p).dump()));
  EXPECT_EQ(PolicyToJson(back).dump(), PolicyToJson(p).dump());
  EXPECT_THROW(PolicyFromJson(nlohmann::json::parse(R"({"window":{"mode":"spiral"}})")),
               ConfigError);
  EXPECT_THROW(PolicyFromJson(nlohmann::json::parse(R"({"warmup":{"fraction":0.1,"count":2}})")),
               ConfigError);
  EXPECT_THROW(PolicyFromJson(nlohmann::json::parse(R"({"percentile":120})")), ConfigError);
}

TEST(TraceTest, ValidationNamesTheLine) {
  EXPECT_EQ(ReadError(""), "not a trace file");
  EXPECT_EQ(ReadError("{\"epoch\":0,\"step\":0,\"layer\":0,\"act\":[1,2]}\n"), "not a trace file");
  EXPECT_EQ(ReadError("epoch,step\n"), "not a trace file");
  EXPECT_NE(ReadError("{\"format\":\"ipte-trace\",\"version\":2,\"run_id\":\"r\",\"layer_widths\":[1]}\n")
                .find("version"),
            std::string::npos);
  EXPECT_EQ(ReadError(kHeader + "{\"epoch\":0,\"step\":0,\"layer\":0,\"act\":[1,2]}\n"
                                "{\"epoch\":0,\"step\":0,\"layer\":1,\"act\":[1,2]}\n"),
            "trace line 3: act length 2 does not match layer width 1");
  EXPECT_EQ(ReadError(kHeader + "{\"epoch\":0,\"step\":0,\"layer\":2,\"act\":[1]}\n"),
            "trace line 2: layer 2 out of range");
  EXPECT_EQ(ReadError(kHeader + "{\"epoch\":0,\"step\":0,\"layer\":0,\"act\":[1,\n"),
            "trace line 2: malformed record");
  EXPECT_EQ(ReadError(kHeader + "{\"epoch\":0,\"step\":0,\"layer\":0,\"act\":[1,\"x\"]}\n"),
            "trace line 2: malformed record");
  EXPECT_EQ(ReadError(kHeader + "{\"epoch\":1,\"step\":0,\"layer\":1,\"act\":[1]}\n"
                                "{\"epoch\":0,\"step\":5,\"layer\":1,\"act\":[1]}\n"),
            "trace line 3: (epoch, step) decreases");
  EXPECT_EQ(ReadError(kHeader + "{\"epoch\":0,\"step\":3,\"layer\":1,\"act\":[1]}\n"
                                "{\"epoch\":0,\"step\":3,\"layer\":1,\"act\":[2]}\n"),
            "trace line 3: layer 1 repeated within one step");
}

TEST(TraceTest, RandomizedRoundTrips) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-300.0, 300.0);
  for (int trial = 0; trial < 120; ++trial) {
    Trace t;
    t.header.run_id = "run \"" + std::to_string(trial) + "\",\\ \xc3\xa9";
    const int layers = 2 + int(rng() % 4);
    for (int l = 0; l < layers; ++l) t.header.layer_widths.push_back(1 + int(rng() % 6));
    t.header.seed = rng();
    t.header.capture.percentile = 50.0 + 49.0 * (double(rng() % 1000) / 1000.0);
    if (rng() % 2) t.header.capture.warmup = capture::WarmupCount{std::int64_t(rng() % 9)};
    if (rng() % 3 == 1) t.header.capture.window = capture::Sliding{2 + std::int64_t(rng() % 30)};
    if (rng() % 3 == 2) t.header.capture.window = capture::PerBatch{2 + std::int64_t(rng() % 30)};
    for (int e = 0; e < 1 + int(rng() % 3); ++e) {
      for (std::int64_t s = 0; s < 1 + std::int64_t(rng() % 8); ++s) {
        for (int l = 0; l < layers; ++l) {
          if (rng() % 4 == 0) continue;
          ActivationRecord r{e, s, l, {}};
          for (int i = 0; i < t.header.layer_widths[std::size_t(l)]; ++i) {
            r.act.push_back(rng() % 5 == 0 ? std::pow(10.0, u(rng)) : g(rng));
          }
          t.records.push_back(std::move(r));
        }
      }
    }
    const std::string first = Dump(t);
    std::istringstream in(first);
    const Trace back = ReadTrace(in);
    ASSERT_EQ(back.records, t.records) << "trial " << trial;
    ASSERT_EQ(Dump(back), first) << "trial " << trial;
  }
}

TEST(TraceTest, FileRoundTripAndSummary) {
  testing::TempDir dir;
  WriteTrace(dir / "t.jsonl", SmallTrace());
  const Trace back = ReadTrace(dir / "t.jsonl");
  const TraceSummary s = Summarize(back);
  EXPECT_EQ(s.epochs, (std::vector<int>{0}));
  EXPECT_EQ(s.layers, (std::vector<int>{0, 1}));
  EXPECT_EQ(s.steps_per_epoch, (std::vector<std::int64_t>{2}));
  EXPECT_EQ(s.record_count, 3u);
  EXPECT_THROW(ReadTrace(dir / "missing.jsonl"), DataError);
}

TEST(IngestTest, ExternalLastLayersOnly) {
  const Ingested in = IngestExternal(kFixture);
  EXPECT_EQ(in.summary.layers, (std::vector<int>{5, 6}));
  EXPECT_EQ(in.summary.epochs, (std::vector<int>{0, 1}));
  EXPECT_EQ(in.summary.steps_per_epoch, (std::vector<std::int64_t>{64, 64}));
  EXPECT_EQ(AnalyzableLayers(in.trace), (std::vector<int>{5, 6}));
}

TEST(IngestTest, BatchWindowedTraceIsAnalyzable) {
  const Ingested in = IngestExternal(kFixture);
  const std::vector<TeRecord> records = AnalyzeTrace(in.trace);
  // 64 steps in batches of 16 per epoch, one pair.
  ASSERT_EQ(records.size(), 8u);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i].epoch, int(i / 4));
    EXPECT_EQ(records[i].window_index, int(i % 4));
    EXPECT_EQ(records[i].pair_id, 0);
    EXPECT_EQ(records[i].pair_count, 16 * 10);
    EXPECT_GE(records[i].te_mean, 0.0);
    EXPECT_LE(records[i].te_mean, 1.0);
  }
}

TEST(IngestTest, SingleLayerRejected) {
  testing::TempDir dir;
  Trace t = SmallTrace();
  std::erase_if(t.records, [](const ActivationRecord& r) { return r.layer == 1; });
  WriteTrace(dir / "one.jsonl", t);
  try {
    IngestExternal(dir / "one.jsonl");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "need at least one adjacent pair");
  }
}

std::string DumpResults(const std::vector<TeRecord>& records) {
  std::ostringstream out;
  WriteResults(out, records);
  return out.str();
}

TEST(ResultsTest, Format) {
  const std::vector<TeRecord> records = {{"a,b", 0, 3, 1, 0.1, 12}, {"r", 2, 0, 0, 2.0 / 7.0, 1}};
  EXPECT_EQ(DumpResults(records),
            "run_id,epoch,window_index,pair_id,te_mean,pair_count\n"
            "\"a,b\",0,3,1,0.1,12\n"
            "r,2,0,0,0.285714285714,1\n");
  EXPECT_EQ(FormatReal(1e-20), "1e-20");
  EXPECT_EQ(FormatReal(0.0), "0");
}

TEST(ResultsTest, RandomizedRoundTrips) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<TeRecord> records;
    for (int i = 0; i < int(rng() % 40); ++i) {
      const double te = rng() % 7 == 0 ? 0.0 : u(rng) * std::pow(10.0, -double(rng() % 12));
      records.push_back({trial % 3 ? "run-" + std::to_string(trial) : "q\"uo,te\nd",
                         int(rng() % 200), int(rng() % 100), int(rng() % 4), te,
                         1 + int(rng() % 256)});
    }
    const std::string first = DumpResults(records);
    std::istringstream in(first);
    const std::vector<TeRecord> back = ReadResults(in);
    ASSERT_EQ(back.size(), records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      EXPECT_EQ(back[i].te_mean, std::strtod(FormatReal(records[i].te_mean).c_str(), nullptr));
      TeRecord expected = records[i];
      expected.te_mean = back[i].te_mean;
      EXPECT_EQ(back[i], expected);
    }
    ASSERT_EQ(DumpResults(back), first) << "trial " << trial;
  }
}

TEST(ResultsTest, Errors) {
  auto error = [](const std::string& text) -> std::string {
    std::istringstream in(text);
    try {
      ReadResults(in);
    } catch (const DataError& e) {
      return e.what();
    }
    return "";
  };
  const std::string header = std::string(kResultsHeader) + "\n";
  EXPECT_EQ(error(""), "empty results file");
  EXPECT_NE(error("a,b\n").find("header"), std::string::npos);
  EXPECT_EQ(error(header + "r,0,0,0,0.5,4\nr,x,0,0,0.5,4\n"), "results line 3: bad epoch 'x'");
  EXPECT_EQ(error(header + "r,0,0,0,-0.5,4\n"), "results line 2: negative te_mean");
  EXPECT_EQ(error(header + "r,0,0,0,0.5\n"), "results line 2: expected 6 fields");
  EXPECT_EQ(error(header + "r,0,0,0,nan,4\n"), "results line 2: bad te_mean 'nan'");
}

// Counts elements with the given tag anywhere below `tree`.
int CountTag(const boost::property_tree::ptree& tree, const std::string& tag) {
  int n = 0;
  for (const auto& [name, child] : tree) {
    if (name == tag) ++n;
    n += CountTag(child, tag);
  }
  return n;
}

boost::property_tree::ptree ParseXml(const std::string& svg) {
  std::istringstream in(svg);
  boost::property_tree::ptree tree;
  boost::property_tree::read_xml(in, tree);
  return tree;
}

TEST(SvgTest, LineChartStructure) {
  const std::vector<Series> series = {{"TE input", {{0, 0.1}, {1, 0.2}, {2, 0.15}}},
                                      {"TE output", {{0, 0.3}, {1, 0.25}, {2, 0.4}}}};
  PlotOptions options;
  options.title = "a <b> & \"c\"";
  const std::string svg = RenderLineChart(series, options);
  const auto tree = ParseXml(svg);
  ASSERT_EQ(tree.size(), 1u);
  EXPECT_EQ(tree.front().first, "svg");
  EXPECT_EQ(tree.get<std::string>("svg.<xmlattr>.viewBox"), "0 0 800 500");
  EXPECT_EQ(CountTag(tree, "polyline"), 2);
  EXPECT_EQ(CountTag(tree, "circle"), 0);
  EXPECT_NE(svg.find(">TE input</text>"), std::string::npos);
  EXPECT_NE(svg.find(">TE output</text>"), std::string::npos);
  EXPECT_NE(svg.find("a &lt;b&gt; &amp; &quot;c&quot;"), std::string::npos);
}

TEST(SvgTest, LogAxis) {
  std::vector<Series> series = {{"TE hidden", {{0, 1e-3}, {1, 1e-1}, {2, 1.0}}}};
  PlotOptions options;
  options.log_y = true;
  EXPECT_EQ(CountTag(ParseXml(RenderLineChart(series, options)), "polyline"), 1);
  series[0].points[1].second = 0.0;
  try {
    RenderLineChart(series, options);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("TE hidden"), std::string::npos);
  }
  options.log_y = false;
  EXPECT_NO_THROW(RenderLineChart(series, options));
}

TEST(SvgTest, Errors) {
  EXPECT_THROW(RenderLineChart({}, PlotOptions{}), ConfigError);
  const std::vector<Series> short_series = {{"lonely", {{0, 1.0}}}};
  try {
    RenderLineChart(short_series, PlotOptions{});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("lonely"), std::string::npos);
  }
  EXPECT_THROW(RenderTrajectory(Series{"ip", {}}, PlotOptions{}), DataError);
}

TEST(SvgTest, TrajectoryMarkers) {
  Series ip{"IP", {}};
  for (int e = 0; e < 5; ++e) ip.points.emplace_back(0.1 * e, 0.05 * e * e);
  const auto tree = ParseXml(RenderTrajectory(ip, PlotOptions{}));
  EXPECT_EQ(CountTag(tree, "circle"), 5);
  EXPECT_EQ(CountTag(tree, "polyline"), 1);
}

TEST(SvgTest, RandomChartsAreWellFormedAndDeterministic) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(1e-6, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Series> series(1 + rng() % 5);
    for (std::size_t s = 0; s < series.size(); ++s) {
      series[s].name = "s" + std::to_string(s) + "<&>";
      for (int i = 0; i < 2 + int(rng() % 30); ++i) series[s].points.emplace_back(i, u(rng));
    }
    PlotOptions options;
    options.log_y = trial % 2 == 0;
    const std::string svg = RenderLineChart(series, options);
    EXPECT_EQ(CountTag(ParseXml(svg), "polyline"), int(series.size()));
    EXPECT_EQ(svg, RenderLineChart(series, options));
  }
}

}  // namespace
}  // namespace ipte::io
