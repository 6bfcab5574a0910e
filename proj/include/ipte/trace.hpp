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

#ifndef IPTE_TRACE_HPP_
#define IPTE_TRACE_HPP_

// Line-delimited JSON activation traces.
//
// Line 1 is the header object:
//   {"format":"ipte-trace","version":1,"run_id":...,"layer_widths":[...],
//    "capture":{...},"seed":...}
// Every following line is one layer's activations at one step:
//   {"epoch":0,"step":12,"layer":1,"act":[...]}
// (epoch, step) must be non-decreasing and a layer may appear at most once
// per step. External trainers can emit any subset of layers.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "ipte/capture.hpp"

namespace ipte::io {

inline constexpr const char* kTraceFormat = "ipte-trace";
inline constexpr int kTraceVersion = 1;

struct TraceHeader {
  std::string run_id;
  std::vector<int> layer_widths;
  capture::CapturePolicy capture;
  std::uint64_t seed = 0;
};

struct Trace {
  TraceHeader header;
  std::vector<capture::ActivationRecord> records;
};

nlohmann::ordered_json PolicyToJson(const capture::CapturePolicy& policy);
// Missing fields take their defaults. Throws ConfigError on bad values.
capture::CapturePolicy PolicyFromJson(const nlohmann::json& j);

void WriteTrace(std::ostream& out, const Trace& trace);
void WriteTrace(const std::filesystem::path& path, const Trace& trace);

// Validates every line; errors name the first offending line number.
Trace ReadTrace(std::istream& in);
Trace ReadTrace(const std::filesystem::path& path);

struct TraceSummary {
  std::vector<int> epochs;             // ascending
  std::vector<int> layers;             // layers present, ascending
  std::vector<std::int64_t> steps_per_epoch;  // distinct steps, per epoch
  std::size_t record_count = 0;
};

TraceSummary Summarize(const Trace& trace);

struct Ingested {
  Trace trace;
  TraceSummary summary;
};

// Reads and validates a trace from another trainer. Throws DataError "need at
// least one adjacent pair" unless at least two layers are present.
Ingested IngestExternal(const std::filesystem::path& path);

}  // namespace ipte::io

#endif  // IPTE_TRACE_HPP_
