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

#include "ipte/trace.hpp"

#include <fstream>
#include <set>
#include <string>

#include "ipte/error.hpp"

namespace ipte::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void LineError(std::size_t line, const std::string& what) {
  throw DataError("trace line " + std::to_string(line) + ": " + what);
}

TraceHeader ParseHeader(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    throw DataError("not a trace file");
  }
  if (!j.is_object() || !j.contains("format") ||
      j["format"] != kTraceFormat) {
    throw DataError("not a trace file");
  }
  if (!j.contains("version") || j["version"] != kTraceVersion) {
    throw DataError("unsupported trace version (expected " +
                    std::to_string(kTraceVersion) + ")");
  }
  TraceHeader h;
  try {
    h.run_id = j.at("run_id").get<std::string>();
    h.layer_widths = j.at("layer_widths").get<std::vector<int>>();
    h.capture = PolicyFromJson(j.value("capture", json::object()));
    h.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    LineError(1, std::string("bad header: ") + e.what());
  } catch (const ConfigError& e) {
    LineError(1, std::string("bad capture policy: ") + e.what());
  }
  for (int w : h.layer_widths) {
    if (w < 1) LineError(1, "layer widths must be >= 1");
  }
  return h;
}

}  // namespace

ordered_json PolicyToJson(const capture::CapturePolicy& policy) {
  ordered_json j;
  j["percentile"] = policy.percentile;
  if (const auto* f = std::get_if<capture::WarmupFraction>(&policy.warmup)) {
    j["warmup"] = {{"fraction", f->fraction}};
  } else {
    j["warmup"] = {{"count", std::get<capture::WarmupCount>(policy.warmup).count}};
  }
  if (std::holds_alternative<capture::CumulativeEpoch>(policy.window)) {
    j["window"] = {{"mode", "cumulative"}};
  } else if (const auto* s = std::get_if<capture::Sliding>(&policy.window)) {
    j["window"] = {{"mode", "sliding"}, {"size", s->size}};
  } else {
    j["window"] = {{"mode", "per_batch"},
                   {"size", std::get<capture::PerBatch>(policy.window).size}};
  }
  j["threshold_scope"] =
      policy.threshold_scope == capture::ThresholdScope::kWindow ? "window"
                                                                 : "epoch";
  return j;
}

capture::CapturePolicy PolicyFromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("capture policy must be an object");
  capture::CapturePolicy p;
  try {
    p.percentile = j.value("percentile", p.percentile);
    if (j.contains("warmup")) {
      const json& w = j["warmup"];
      if (w.contains("fraction") == w.contains("count")) {
        throw ConfigError("warmup needs exactly one of 'fraction' or 'count'");
      }
      if (w.contains("fraction")) {
        p.warmup = capture::WarmupFraction{w["fraction"].get<double>()};
      } else {
        p.warmup = capture::WarmupCount{w["count"].get<std::int64_t>()};
      }
    }
    if (j.contains("window")) {
      const json& w = j["window"];
      const std::string mode = w.at("mode").get<std::string>();
      if (mode == "cumulative") {
        p.window = capture::CumulativeEpoch{};
      } else if (mode == "sliding") {
        p.window = capture::Sliding{w.at("size").get<std::int64_t>()};
      } else if (mode == "per_batch") {
        p.window = capture::PerBatch{w.at("size").get<std::int64_t>()};
      } else {
        throw ConfigError("unknown window mode '" + mode + "'");
      }
    }
    const std::string scope = j.value("threshold_scope", std::string("window"));
    if (scope == "window") {
      p.threshold_scope = capture::ThresholdScope::kWindow;
    } else if (scope == "epoch") {
      p.threshold_scope = capture::ThresholdScope::kEpoch;
    } else {
      throw ConfigError("unknown threshold scope '" + scope + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad capture policy: ") + e.what());
  }
  p.Validate();
  return p;
}

void WriteTrace(std::ostream& out, const Trace& trace) {
  ordered_json header;
  header["format"] = kTraceFormat;
  header["version"] = kTraceVersion;
  header["run_id"] = trace.header.run_id;
  header["layer_widths"] = trace.header.layer_widths;
  header["capture"] = PolicyToJson(trace.header.capture);
  header["seed"] = trace.header.seed;
  out << header.dump() << '\n';
  for (const capture::ActivationRecord& r : trace.records) {
    ordered_json line;
    line["epoch"] = r.epoch;
    line["step"] = r.step;
    line["layer"] = r.layer;
    line["act"] = r.act;
    out << line.dump() << '\n';
  }
}

void WriteTrace(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write trace file: " + path.string());
  WriteTrace(out, trace);
  if (!out) throw DataError("failed writing trace file: " + path.string());
}

Trace ReadTrace(std::istream& in) {
  std::string text;
  if (!std::getline(in, text)) throw DataError("not a trace file");
  Trace trace;
  trace.header = ParseHeader(text);
  const auto layer_count = static_cast<int>(trace.header.layer_widths.size());

  std::size_t line = 1;
  int prev_epoch = -1;
  std::int64_t prev_step = -1;
  std::set<int> layers_at_step;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    capture::ActivationRecord r;
    try {
      const json j = json::parse(text);
      if (!j.is_object()) LineError(line, "malformed record");
      r.epoch = j.at("epoch").get<int>();
      r.step = j.at("step").get<std::int64_t>();
      r.layer = j.at("layer").get<int>();
      r.act = j.at("act").get<std::vector<double>>();
    } catch (const json::exception&) {
      LineError(line, "malformed record");
    }
    if (r.epoch < 0 || r.step < 0) LineError(line, "negative epoch or step");
    if (r.layer < 0 || r.layer >= layer_count) {
      LineError(line, "layer " + std::to_string(r.layer) + " out of range");
    }
    if (r.act.size() !=
        static_cast<std::size_t>(trace.header.layer_widths[static_cast<std::size_t>(r.layer)])) {
      LineError(line, "act length " + std::to_string(r.act.size()) +
                          " does not match layer width " +
                          std::to_string(trace.header.layer_widths[static_cast<std::size_t>(r.layer)]));
    }
    if (r.epoch < prev_epoch || (r.epoch == prev_epoch && r.step < prev_step)) {
      LineError(line, "(epoch, step) decreases");
    }
    if (r.epoch != prev_epoch || r.step != prev_step) layers_at_step.clear();
    if (!layers_at_step.insert(r.layer).second) {
      LineError(line, "layer " + std::to_string(r.layer) +
                          " repeated within one step");
    }
    prev_epoch = r.epoch;
    prev_step = r.step;
    trace.records.push_back(std::move(r));
  }
  return trace;
}

Trace ReadTrace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open trace file: " + path.string());
  return ReadTrace(in);
}

TraceSummary Summarize(const Trace& trace) {
  TraceSummary s;
  s.record_count = trace.records.size();
  std::set<int> layers;
  int current_epoch = -1;
  std::int64_t current_step = -1;
  for (const capture::ActivationRecord& r : trace.records) {
    layers.insert(r.layer);
    if (r.epoch != current_epoch) {
      s.epochs.push_back(r.epoch);
      s.steps_per_epoch.push_back(0);
      current_epoch = r.epoch;
      current_step = -1;
    }
    if (r.step != current_step) {
      ++s.steps_per_epoch.back();
      current_step = r.step;
    }
  }
  s.layers.assign(layers.begin(), layers.end());
  return s;
}

Ingested IngestExternal(const std::filesystem::path& path) {
  Ingested out;
  out.trace = ReadTrace(path);
  out.summary = Summarize(out.trace);
  if (out.summary.layers.size() < 2) {
    throw DataError("need at least one adjacent pair");
  }
  return out;
}

}  // namespace ipte::io
