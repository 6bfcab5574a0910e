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

#include "ipte/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "ipte/analysis.hpp"
#include "ipte/error.hpp"
#include "ipte/pipeline.hpp"
#include "ipte/results.hpp"
#include "ipte/svg.hpp"
#include "ipte/trace.hpp"

namespace ipte::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <class T>
T Field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

const json& Object(const json& j, const char* key) {
  static const json kEmpty = json::object();
  if (!j.contains(key)) return kEmpty;
  if (!j.at(key).is_object()) {
    throw ConfigError(std::string("config field '") + key + "' must be an object");
  }
  return j.at(key);
}

fs::path Resolve(const RunConfig& c, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : c.base_dir / path;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

std::string MetricsCsv(const std::vector<nn::EpochMetrics>& epochs) {
  std::ostringstream out;
  out << "epoch,loss,train_accuracy,test_accuracy\n";
  for (const nn::EpochMetrics& m : epochs) {
    out << m.epoch << ',' << io::FormatReal(m.loss) << ','
        << io::FormatReal(m.train_accuracy) << ','
        << io::FormatReal(m.test_accuracy) << '\n';
  }
  return out.str();
}

// Removes everything it tracked unless Commit() is called.
class OutputGuard {
 public:
  explicit OutputGuard(const fs::path& dir) : dir_(dir) {
    std::error_code ec;
    if (!fs::exists(dir_, ec)) {
      if (!fs::create_directories(dir_, ec)) {
        throw DataError("cannot create output directory " + dir_.string());
      }
      created_dir_ = true;
    }
  }
  ~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (const fs::path& p : files_) fs::remove(p, ec);
    if (created_dir_) fs::remove(dir_, ec);
  }
  OutputGuard(const OutputGuard&) = delete;
  OutputGuard& operator=(const OutputGuard&) = delete;

  fs::path Track(const std::string& name) {
    files_.push_back(dir_ / name);
    return files_.back();
  }
  void Commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
  bool created_dir_ = false;
  bool committed_ = false;
};

}  // namespace

RunConfig ParseRunConfig(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  c.base_dir = base_dir;
  c.run_id = Field<std::string>(j, "run_id", c.run_id);
  c.output_dir = Field<std::string>(j, "output_dir", "");

  const json& ds = Object(j, "dataset");
  c.dataset.path = Field<std::string>(ds, "path", "");
  c.dataset.fixture = Field<std::string>(ds, "fixture", "");
  if (c.dataset.path.empty() == c.dataset.fixture.empty()) {
    throw ConfigError("dataset needs exactly one of 'path' or 'fixture'");
  }
  if (!c.dataset.fixture.empty() && c.dataset.fixture != "xor") {
    throw ConfigError("unknown fixture '" + c.dataset.fixture + "'");
  }
  if (!c.dataset.path.empty() && !fs::exists(Resolve(c, c.dataset.path))) {
    throw ConfigError("dataset file not found: " +
                      Resolve(c, c.dataset.path).string());
  }
  const json& schema = Object(ds, "schema");
  c.dataset.schema.has_header = Field<bool>(schema, "has_header", true);
  if (schema.contains("label_column")) {
    const json& label = schema.at("label_column");
    if (label.is_string()) {
      c.dataset.schema.label_column = label.get<std::string>();
    } else if (label.is_number_integer()) {
      c.dataset.schema.label_column = label.get<int>();
    } else {
      throw ConfigError("label_column must be a name or an index");
    }
  }
  c.dataset.schema.ignore_columns =
      Field<std::vector<std::string>>(schema, "ignore_columns", {});
  c.dataset.test_fraction = Field<double>(ds, "test_fraction", 0.2);
  if (!(c.dataset.test_fraction >= 0.0 && c.dataset.test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in [0, 1)");
  }
  c.dataset.normalize = Field<bool>(ds, "normalize", true);

  const json& model = Object(j, "model");
  c.layer_widths = Field<std::vector<int>>(model, "layer_widths", {});
  c.hidden_widths = Field<std::vector<int>>(model, "hidden_widths", {});
  if (!c.layer_widths.empty() && !c.hidden_widths.empty()) {
    throw ConfigError("give either layer_widths or hidden_widths, not both");
  }
  c.hidden_activation = nn::ParseActivation(
      Field<std::string>(model, "hidden_activation", "tanh"));

  const json& train = Object(j, "train");
  if (!train.contains("seed")) throw ConfigError("train.seed is required");
  c.train.seed = Field<std::uint64_t>(train, "seed", 0);
  c.train.learning_rate = Field<double>(train, "learning_rate", 0.05);
  c.train.epochs = Field<int>(train, "epochs", 200);
  c.train.shuffle_each_epoch = Field<bool>(train, "shuffle_each_epoch", true);
  c.train.capture = io::PolicyFromJson(Object(train, "capture"));
  c.train.Validate();

  const json& te = Object(j, "te");
  c.te.target = Field<int>(te, "k", 1);
  c.te.source = Field<int>(te, "l", 1);
  c.te.Validate();
  return c;
}

RunConfig LoadRunConfig(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return ParseRunConfig(j, path.parent_path());
}

ordered_json ToJson(const RunConfig& c) {
  ordered_json j;
  j["run_id"] = c.run_id;
  ordered_json ds;
  if (!c.dataset.path.empty()) ds["path"] = c.dataset.path;
  if (!c.dataset.fixture.empty()) ds["fixture"] = c.dataset.fixture;
  ordered_json schema;
  schema["has_header"] = c.dataset.schema.has_header;
  if (const auto* name = std::get_if<std::string>(&c.dataset.schema.label_column)) {
    schema["label_column"] = *name;
  } else {
    schema["label_column"] = std::get<int>(c.dataset.schema.label_column);
  }
  schema["ignore_columns"] = c.dataset.schema.ignore_columns;
  ds["schema"] = schema;
  ds["test_fraction"] = c.dataset.test_fraction;
  ds["normalize"] = c.dataset.normalize;
  j["dataset"] = ds;
  ordered_json model;
  if (!c.layer_widths.empty()) {
    model["layer_widths"] = c.layer_widths;
  } else {
    model["hidden_widths"] = c.hidden_widths;
  }
  model["hidden_activation"] = nn::ToString(c.hidden_activation);
  j["model"] = model;
  ordered_json train;
  train["learning_rate"] = c.train.learning_rate;
  train["epochs"] = c.train.epochs;
  train["seed"] = c.train.seed;
  train["shuffle_each_epoch"] = c.train.shuffle_each_epoch;
  train["capture"] = io::PolicyToJson(c.train.capture);
  j["train"] = train;
  j["te"] = {{"k", c.te.target}, {"l", c.te.source}};
  if (!c.output_dir.empty()) j["output_dir"] = c.output_dir;
  return j;
}

PreparedRun PrepareRun(RunConfig config) {
  data::Dataset ds = config.dataset.fixture.empty()
                         ? data::LoadCsv(Resolve(config, config.dataset.path),
                                         config.dataset.schema)
                         : data::XorFixture();
  if (config.dataset.normalize) ds = data::Normalize(ds);

  PreparedRun run;
  if (config.dataset.test_fraction > 0.0) {
    run.split = data::Split(ds, config.dataset.test_fraction, config.train.seed);
  } else {
    std::vector<std::size_t> all(ds.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    run.split.train_indices = all;
    run.split.test_indices = all;
    run.split.train = ds;
    run.split.test = ds;
  }

  if (config.layer_widths.empty()) {
    std::vector<int> hidden = config.hidden_widths;
    if (hidden.empty()) hidden.push_back(nn::DefaultHiddenWidth(ds.feature_count()));
    config.layer_widths.push_back(ds.feature_count());
    config.layer_widths.insert(config.layer_widths.end(), hidden.begin(), hidden.end());
    config.layer_widths.push_back(ds.class_count);
    config.hidden_widths.clear();
  }
  if (config.layer_widths.front() != ds.feature_count() ||
      config.layer_widths.back() != ds.class_count) {
    throw ConfigError("layer_widths must start with " +
                      std::to_string(ds.feature_count()) + " inputs and end with " +
                      std::to_string(ds.class_count) + " outputs for this dataset");
  }
  run.spec.layer_widths = config.layer_widths;
  run.spec.hidden_activation = config.hidden_activation;
  run.spec.Validate();
  run.config = std::move(config);
  return run;
}

void CmdTrain(const fs::path& config_path, const fs::path& out_dir) {
  RunConfig config = LoadRunConfig(config_path);
  fs::path dir = out_dir;
  if (dir.empty()) {
    if (config.output_dir.empty()) {
      throw ConfigError("--out: no output directory given");
    }
    dir = Resolve(config, config.output_dir);
  }
  PreparedRun run = PrepareRun(std::move(config));

  capture::ActivationRecorder recorder(run.config.train.capture);
  const nn::RunResult result = nn::Train(run.spec, run.config.train,
                                         run.split.train, run.split.test, &recorder);

  io::Trace trace;
  trace.header.run_id = run.config.run_id;
  trace.header.layer_widths = run.spec.layer_widths;
  trace.header.capture = run.config.train.capture;
  trace.header.seed = run.config.train.seed;
  trace.records = recorder.TakeRecords();

  OutputGuard guard(dir);
  io::WriteTrace(guard.Track("trace.jsonl"), trace);
  WriteText(guard.Track("metrics.csv"), MetricsCsv(result.epochs));
  WriteText(guard.Track("config.json"), ToJson(run.config).dump(2) + "\n");
  guard.Commit();
}

void CmdAnalyze(const fs::path& trace_path, te::HistoryOrder order,
                const fs::path& out_path) {
  order.Validate();
  const io::Ingested ingested = io::IngestExternal(trace_path);
  AnalyzeOptions options;
  options.order = order;
  const std::vector<analysis::TeRecord> records =
      AnalyzeTrace(ingested.trace, options);
  io::WriteResults(out_path, records);
}

void CmdPlot(const PlotRequest& r) {
  if (r.stride < 1) throw ConfigError("--stride must be >= 1");
  const std::vector<analysis::TeRecord> records = io::ReadResults(r.results);
  if (records.empty()) throw DataError("--results: file has no records");
  const int pair_count = analysis::PairCount(records);
  if (r.pair && (*r.pair < 0 || *r.pair >= pair_count)) {
    throw ConfigError("--pair: unknown pair_id " + std::to_string(*r.pair));
  }

  io::PlotOptions options;
  options.log_y = r.log_y;
  options.x_label = "window";
  options.y_label = r.normalize ? "normalized TE" : "TE (bits)";

  std::string svg;
  try {
    if (r.mode == "ip") {
      std::vector<analysis::IpPoint> ip;
      try {
        ip = analysis::IpTrajectory(records);
      } catch (const DataError& e) {
        throw ConfigError(std::string("--mode ip: ") + e.what());
      }
      io::Series s{analysis::PairLabel(0, pair_count) + " vs " +
                       analysis::PairLabel(pair_count - 1, pair_count),
                   {}};
      for (const analysis::IpPoint& p : ip) s.points.emplace_back(p.x, p.y);
      options.title = r.title.empty() ? "TE information plane" : r.title;
      options.x_label = analysis::PairLabel(0, pair_count) + " (bits)";
      options.y_label = analysis::PairLabel(pair_count - 1, pair_count) + " (bits)";
      svg = io::RenderTrajectory(s, options);
    } else if (r.mode == "per-epoch") {
      const int pair = r.pair.value_or(0);
      std::vector<io::Series> series;
      for (const auto& [epoch, curve] :
           analysis::PerEpochCurves(records, pair, r.stride)) {
        io::Series s{"epoch " + std::to_string(epoch), {}};
        for (const analysis::CurvePoint& p : curve) {
          s.points.emplace_back(p.window_index, p.value);
        }
        series.push_back(std::move(s));
      }
      options.title = r.title.empty()
                          ? analysis::PairLabel(pair, pair_count) + " per epoch"
                          : r.title;
      svg = io::RenderLineChart(series, options);
    } else if (r.mode == "averaged") {
      std::vector<io::Series> series;
      for (int pair = 0; pair < pair_count; ++pair) {
        if (r.pair && *r.pair != pair) continue;
        analysis::AggregatedCurve curve = analysis::AverageAcrossEpochs(records, pair);
        if (r.normalize) curve = analysis::NormalizeCurve(std::move(curve));
        io::Series s{analysis::PairLabel(pair, pair_count), {}};
        for (const analysis::CurvePoint& p : curve.points) {
          s.points.emplace_back(p.window_index, p.value);
        }
        series.push_back(std::move(s));
      }
      options.title = r.title.empty() ? "TE averaged across epochs" : r.title;
      svg = io::RenderLineChart(series, options);
    } else if (r.mode == "stacked") {
      const int pair = r.pair.value_or(0);
      io::Series s{analysis::PairLabel(pair, pair_count),
                   analysis::StackedCurve(records, pair)};
      options.title = r.title.empty() ? "TE with epochs stacked" : r.title;
      options.x_label = "window (epochs concatenated)";
      svg = io::RenderLineChart(std::span<const io::Series>(&s, 1), options);
    } else {
      throw ConfigError("--mode: unknown mode '" + r.mode + "'");
    }
  } catch (const DataError& e) {
    if (r.log_y) throw DataError(std::string("--log-y: ") + e.what());
    throw;
  }
  WriteText(r.out, svg);
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Transfer entropy between network layers during training"};
  app.require_subcommand(1);

  fs::path train_config;
  fs::path train_out;
  CLI::App* train = app.add_subcommand("train", "train a network and record its activations");
  train->add_option("--config", train_config, "run configuration (JSON)")->required();
  train->add_option("--out", train_out, "output directory");

  fs::path trace_path;
  fs::path analyze_out;
  int k = 1;
  int l = 1;
  CLI::App* analyze = app.add_subcommand("analyze", "compute layer-pair TE from a trace");
  analyze->add_option("--trace", trace_path, "trace file (JSON lines)")->required();
  analyze->add_option("--k", k, "target history order")->capture_default_str();
  analyze->add_option("--l", l, "source history order")->capture_default_str();
  analyze->add_option("--out", analyze_out, "result CSV")->required();

  PlotRequest plot_request;
  int pair = -1;
  CLI::App* plot = app.add_subcommand("plot", "render result curves as SVG");
  plot->add_option("--results", plot_request.results, "result CSV")->required();
  plot->add_option("--mode", plot_request.mode, "per-epoch | averaged | stacked | ip")
      ->capture_default_str();
  plot->add_option("--pair", pair, "layer pair id");
  plot->add_option("--stride", plot_request.stride, "epoch stride for per-epoch mode")
      ->capture_default_str();
  plot->add_flag("--log-y", plot_request.log_y, "base-10 logarithmic y axis");
  plot->add_flag("--normalize", plot_request.normalize, "min-max normalize averaged curves");
  plot->add_option("--title", plot_request.title, "chart title");
  plot->add_option("--out", plot_request.out, "SVG output")->required();

  fs::path ingest_path;
  CLI::App* ingest = app.add_subcommand("ingest", "validate an external trace and summarize it");
  ingest->add_option("--trace", ingest_path, "trace file (JSON lines)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) {
      CmdTrain(train_config, train_out);
    } else if (*analyze) {
      CmdAnalyze(trace_path, te::HistoryOrder{k, l}, analyze_out);
    } else if (*plot) {
      if (plot->count("--pair") > 0) plot_request.pair = pair;
      CmdPlot(plot_request);
    } else if (*ingest) {
      const io::Ingested ingested = io::IngestExternal(ingest_path);
      const io::TraceSummary& s = ingested.summary;
      out << "run_id: " << ingested.trace.header.run_id << '\n'
          << "epochs: " << s.epochs.size() << '\n'
          << "layers:";
      for (int layer : s.layers) out << ' ' << layer;
      out << "\nsteps per epoch:";
      for (std::int64_t n : s.steps_per_epoch) out << ' ' << n;
      out << "\nrecords: " << s.record_count << '\n';
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace ipte::cli
