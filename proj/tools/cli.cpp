// Copyright 2026 The drm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "drm/csv.hpp"
#include "drm/error.hpp"
#include "drm/eval.hpp"
#include "drm/pipeline.hpp"
#include "drm/rng.hpp"
#include "drm/synth.hpp"
#include "run_config.hpp"

namespace drm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSessionSuffix = ".lmks.jsonl";
constexpr const char* kRatingsSuffix = ".ratings.csv";

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  std::string data;
  std::string gaze_case;
  std::string forest;
  std::string model;
  std::string param;
  std::vector<long long> values;
  std::string arch;
  std::string inputs;
};

struct Context {
  RunConfig config;
  std::string hash;
  std::ostream& out;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

fs::path output_dir(const Context& ctx) {
  std::error_code ec;
  fs::create_directories(ctx.config.out_dir, ec);
  if (ec) throw Error("cannot create output directory '" + ctx.config.out_dir + "': " + ec.message());
  return ctx.config.out_dir;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  body(f);
  if (!f) throw Error("failed writing '" + path.string() + "'");
}

std::string with_hash(const std::string& json_text, const std::string& hash) {
  json j = json::parse(json_text);
  j["config_hash"] = hash;
  return j.dump(1) + "\n";
}

ReportFormat report_format(const RunConfig& c) { return c.format == "json" ? ReportFormat::Json : ReportFormat::Csv; }

// --- corpus ----------------------------------------------------------------

struct CorpusEntry {
  SessionRecording session;
  std::vector<RatingSet> ratings;
  std::vector<FrameFeatures> features;
};

std::vector<CorpusEntry> load_corpus(const RunConfig& c, bool need_ratings) {
  if (!fs::is_directory(c.data_dir)) throw ConfigError("data directory '" + c.data_dir + "' does not exist");
  std::vector<fs::path> sessions, ratings;
  for (const auto& e : fs::directory_iterator(c.data_dir)) {
    const std::string name = e.path().filename().string();
    if (ends_with(name, kSessionSuffix)) sessions.push_back(e.path());
    if (ends_with(name, kRatingsSuffix)) ratings.push_back(e.path());
  }
  std::sort(sessions.begin(), sessions.end());
  std::sort(ratings.begin(), ratings.end());
  if (sessions.empty()) throw Error("no " + std::string(kSessionSuffix) + " files in '" + c.data_dir + "'");

  std::vector<CorpusEntry> out;
  for (const fs::path& p : sessions) {
    CorpusEntry e;
    try {
      e.session = load_session(p.string());
    } catch (const Error& err) {
      throw Error(p.string() + ": " + err.what());
    }
    const std::string name = p.filename().string();
    const std::string prefix = name.substr(0, name.size() - std::string(kSessionSuffix).size()) + ".";
    for (const fs::path& r : ratings) {
      if (r.filename().string().rfind(prefix, 0) != 0) continue;
      try {
        e.ratings.push_back(load_ratings(r.string(), c.interval_seconds));
      } catch (const Error& err) {
        throw Error(r.string() + ": " + err.what());
      }
    }
    if (need_ratings && e.ratings.empty()) throw Error(p.string() + ": no ratings files for this session");
    e.features = session_features(e.session);
    out.push_back(std::move(e));
  }
  return out;
}

struct GazeRun {
  GazeForest forest;
  ClassifierEvaluation evaluation;
  std::size_t n_labeled = 0, n_train = 0, n_test = 0;
};

GazeRun train_gaze(const std::vector<CorpusEntry>& corpus, const RunConfig& c) {
  std::vector<LabeledSample> samples;
  for (const CorpusEntry& e : corpus) {
    auto s = labeled_samples(e.session, e.features, c.gaze_case);
    samples.insert(samples.end(), s.begin(), s.end());
  }
  if (samples.size() < 2) throw Error("need at least two annotated frames to train the gaze classifier");
  const TrainTestSplit split =
      split_train_test(samples.size(), c.train_ratio, derive_seed(c.seed, "gaze/split"), c.chronological_split);
  auto [train, test] = apply_split(samples, split);
  ForestConfig fc = c.forest;
  fc.seed = derive_seed(c.seed, "gaze/forest");
  GazeRun run;
  run.forest = train_forest(train, fc, c.gaze_case);
  run.evaluation = evaluate_classifier(run.forest, test);
  run.n_labeled = samples.size();
  run.n_train = train.size();
  run.n_test = test.size();
  return run;
}

GazeForest readiness_forest(const std::vector<CorpusEntry>& corpus, const Context& ctx) {
  if (ctx.config.forest_path.empty()) return train_gaze(corpus, ctx.config).forest;
  std::ifstream in(ctx.config.forest_path);
  if (!in) throw Error("cannot open forest file '" + ctx.config.forest_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return GazeForest::from_json(ss.str());
}

std::vector<PreparedSession> prepare(const std::vector<CorpusEntry>& corpus, const GazeForest& forest,
                                     const RunConfig& c) {
  std::vector<PreparedSession> out;
  for (const CorpusEntry& e : corpus) {
    try {
      out.push_back(prepare_session(e.session, e.ratings, forest, {c.spline_clamp}));
    } catch (const Error& err) {
      throw Error("session '" + e.session.session_id + "': " + err.what());
    }
  }
  return out;
}

FoldPlan plan_folds(std::size_t n_windows, std::size_t n_folds, const RunConfig& c) {
  try {
    return ts_folds(n_windows, n_folds, c.val_size, c.test_size);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

void stamp(ExperimentReport& r, const Context& ctx, std::size_t n_windows) {
  r.metadata["config_hash"] = ctx.hash;
  r.metadata["window_length"] = std::to_string(ctx.config.window_length);
  r.metadata["stride"] = std::to_string(ctx.config.stride);
  r.metadata["n_windows"] = std::to_string(n_windows);
}

void print_written(const Context& ctx, const std::vector<std::string>& paths) {
  for (const std::string& p : paths) ctx.out << "wrote " << p << '\n';
}

// --- commands --------------------------------------------------------------

int cmd_synth(const Context& ctx) {
  const fs::path dir = output_dir(ctx);
  const std::vector<std::string> comments{"config_hash=" + ctx.hash};
  std::size_t frames = 0, files = 0;
  for (const SyntheticSession& s : generate_benchmark(ctx.config.seed)) {
    const std::string id = s.session.session_id;
    write_file(dir / (id + kSessionSuffix),
               [&](std::ostream& o) { write_session(o, s.session, {{"config_hash", ctx.hash}}); });
    ++files;
    for (const RatingSet& r : s.ratings) {
      write_file(dir / (id + "." + r.rater_id + kRatingsSuffix), [&](std::ostream& o) { write_ratings(o, r, comments); });
      ++files;
    }
    frames += s.session.frames.size();
  }
  ctx.out << "synth: wrote " << files << " files (" << frames << " frames) to " << dir.string() << '\n';
  return kExitOk;
}

int cmd_features(const Context& ctx) {
  const auto corpus = load_corpus(ctx.config, false);
  const fs::path dir = output_dir(ctx);
  for (const CorpusEntry& e : corpus) {
    write_file(dir / (e.session.session_id + ".features.csv"), [&](std::ostream& o) {
      o << "# config_hash=" << ctx.hash << '\n';
      o << "frame,yaw,pitch,roll,ear_r,ear_l,hr_r,hr_l,vr_r,vr_l,hr_band,vr_band,eyes_closed,degenerate\n";
      for (std::size_t i = 0; i < e.features.size(); ++i) {
        const FrameFeatures& f = e.features[i];
        const EyeMetrics& m = f.eyes;
        o << e.session.frames[i].frame_index << ',' << format_double(f.head.yaw) << ','
          << format_double(f.head.pitch) << ',' << format_double(f.head.roll);
        for (double v : m.values()) o << ',' << format_double(v);
        const bool degenerate = m.ear_r.degenerate || m.ear_l.degenerate || m.hr_r.degenerate || m.hr_l.degenerate ||
                                m.vr_r.degenerate || m.vr_l.degenerate;
        o << ',' << to_string(band_of((m.hr_r.value + m.hr_l.value) / 2.0, GazeAxis::Horizontal)) << ','
          << to_string(band_of((m.vr_r.value + m.vr_l.value) / 2.0, GazeAxis::Vertical)) << ','
          << ((m.ear_r.value + m.ear_l.value) / 2.0 < 0.2 ? 1 : 0) << ',' << (degenerate ? 1 : 0) << '\n';
      }
    });
  }
  ctx.out << "features: " << corpus.size() << " sessions -> " << dir.string() << '\n';
  return kExitOk;
}

int cmd_train_gaze(const Context& ctx) {
  const auto corpus = load_corpus(ctx.config, false);
  const GazeRun run = train_gaze(corpus, ctx.config);
  const fs::path dir = output_dir(ctx);
  const std::size_t dims = column_count(ctx.config.gaze_case);
  write_file(dir / "gaze_forest.json", [&](std::ostream& o) { o << with_hash(run.forest.to_json(), ctx.hash); });
  write_file(dir / "gaze_confusion.csv", [&](std::ostream& o) {
    o << "# config_hash=" << ctx.hash << '\n';
    write_confusion_csv(o, run.evaluation.confusion);
  });
  if (ctx.config.format == "json") {
    write_file(dir / "gaze_report.json", [&](std::ostream& o) {
      json j = {{"case", to_string(ctx.config.gaze_case)},
                {"input_dims", dims},
                {"n_labeled", run.n_labeled},
                {"n_train", run.n_train},
                {"n_test", run.n_test},
                {"accuracy", run.evaluation.accuracy},
                {"config_hash", ctx.hash}};
      o << j.dump(1) << '\n';
    });
  } else {
    write_file(dir / "gaze_report.csv", [&](std::ostream& o) {
      o << "# config_hash=" << ctx.hash << '\n';
      o << "case,input_dims,n_labeled,n_train,n_test,accuracy\n";
      o << to_string(ctx.config.gaze_case) << ',' << dims << ',' << run.n_labeled << ',' << run.n_train << ','
        << run.n_test << ',' << format_double(run.evaluation.accuracy) << '\n';
    });
  }
  ctx.out << "train-gaze: case " << to_string(ctx.config.gaze_case) << ", input dims " << dims << ", "
          << run.n_train << " train / " << run.n_test << " test frames, accuracy "
          << format_double(run.evaluation.accuracy) << '\n';
  return kExitOk;
}

int cmd_label(const Context& ctx) {
  const auto corpus = load_corpus(ctx.config, true);
  const fs::path dir = output_dir(ctx);
  std::vector<double> hr, readiness;
  for (const CorpusEntry& e : corpus) {
    ReadinessSeries s;
    try {
      s = readiness_for_session(e.session, e.ratings, {ctx.config.spline_clamp});
    } catch (const Error& err) {
      throw Error("session '" + e.session.session_id + "': " + err.what());
    }
    write_file(dir / (e.session.session_id + ".readiness.csv"),
               [&](std::ostream& o) { write_readiness_csv(o, s, {"config_hash=" + ctx.hash}); });
    for (std::size_t i = 0; i < e.features.size(); ++i) {
      hr.push_back((e.features[i].eyes.hr_r.value + e.features[i].eyes.hr_l.value) / 2.0);
      readiness.push_back(s.values[i]);
    }
  }
  write_file(dir / "hr_variability.csv", [&](std::ostream& o) {
    o << "# config_hash=" << ctx.hash << '\n';
    write_variability_csv(o, gaze_variability_by_class(hr, readiness));
  });
  ctx.out << "label: " << corpus.size() << " readiness series -> " << dir.string() << '\n';
  return kExitOk;
}

int cmd_train_readiness(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const auto corpus = load_corpus(c, true);
  const GazeForest forest = readiness_forest(corpus, ctx);
  const auto prepared = prepare(corpus, forest, c);
  const std::vector<Window> windows = corpus_windows(prepared, c.window_length, c.stride);
  const FoldPlan plan = plan_folds(windows.size(), c.n_folds, c);
  const fs::path dir = output_dir(ctx);
  const fs::path models = dir / "models";
  fs::create_directories(models);

  ExperimentConfig ec;
  ec.architectures = c.architectures;
  ec.cases = c.cases;
  ec.train = c.train;
  ec.seed = c.seed;
  ec.threads = c.threads;
  ec.on_model = [&](Architecture a, InputCase ic, std::size_t fold, const ReadinessModel& m) {
    const std::string name = std::string(to_string(a)) + "_" + to_string(ic) + "_fold" + std::to_string(fold) + ".json";
    write_file(models / name, [&](std::ostream& o) { o << with_hash(m.to_json(), ctx.hash); });
  };
  ExperimentReport report = run_ablation(windows, plan, ec);
  stamp(report, ctx, windows.size());
  print_written(ctx, emit_report(report, dir.string(), report_format(c), "report"));

  write_file(dir / "folds.csv", [&](std::ostream& o) {
    o << "# config_hash=" << ctx.hash << '\n' << plan.describe();
  });
  std::vector<GazeZone> zones;
  std::vector<double> readiness;
  for (const PreparedSession& p : prepared) {
    zones.insert(zones.end(), p.zones.begin(), p.zones.end());
    readiness.insert(readiness.end(), p.readiness.values.begin(), p.readiness.values.end());
  }
  write_file(dir / "zone_correlation.csv", [&](std::ostream& o) {
    o << "# config_hash=" << ctx.hash << '\n';
    write_correlation_csv(o, zone_readiness_correlation(zones, readiness));
  });
  for (const ReportRow& r : report.rows) {
    if (!r.agg) continue;
    ctx.out << r.arch << ' ' << r.feature_case << ": mean test MAE " << format_double(r.test_mae) << " (std "
            << format_double(r.std_mae.value_or(0.0)) << ", baseline " << format_double(r.baseline_mae.value_or(0.0))
            << ")\n";
  }
  return kExitOk;
}

int cmd_evaluate(const Context& ctx) {
  const RunConfig& c = ctx.config;
  if (c.model_path.empty()) throw ConfigError("evaluate requires --model");
  std::ifstream in(c.model_path);
  if (!in) throw Error("cannot open model file '" + c.model_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const ReadinessModel model = ReadinessModel::from_json(ss.str());

  const auto corpus = load_corpus(c, true);
  const GazeForest forest = readiness_forest(corpus, ctx);
  const auto prepared = prepare(corpus, forest, c);
  const std::vector<Window> windows =
      select_case(corpus_windows(prepared, model.meta.window_length, c.stride), model.meta.feature_case);
  const std::vector<double> pred = predict_series(model, windows);
  std::vector<double> truth;
  for (const Window& w : windows) truth.push_back(w.target);

  ExperimentReport report;
  ReportRow row;
  row.arch = to_string(model.params.shape.arch);
  row.feature_case = to_string(model.meta.feature_case);
  row.test_mae = mae(pred, truth);
  report.rows.push_back(row);
  PredictionTrace trace{row.arch, row.feature_case, 0, {}, truth, pred};
  for (std::size_t k = 0; k < windows.size(); ++k) trace.window_index.push_back(k);
  report.traces.push_back(std::move(trace));
  stamp(report, ctx, windows.size());
  report.metadata["model"] = fs::path(c.model_path).filename().string();
  print_written(ctx, emit_report(report, output_dir(ctx).string(), report_format(c), "evaluation"));
  ctx.out << "evaluate: " << windows.size() << " windows, MAE " << format_double(row.test_mae) << '\n';
  return kExitOk;
}

int cmd_sweep(const Context& ctx, const Flags& flags) {
  const RunConfig& c = ctx.config;
  const SweepParameter param = c.sweep_parameter == "folds" ? SweepParameter::Folds : SweepParameter::BatchSize;
  if (c.sweep_values.empty()) throw ConfigError("sweep needs at least one value");
  ExperimentConfig ec;
  ec.architectures = {Architecture::Bidirectional};
  ec.cases = {InputCase::Both};
  if (!flags.arch.empty()) {
    const auto a = parse_architecture(flags.arch);
    if (!a) throw ConfigError("unknown architecture '" + flags.arch + "'");
    ec.architectures = {*a};
  }
  if (!flags.inputs.empty()) {
    const auto ic = parse_input_case(flags.inputs);
    if (!ic) throw ConfigError("unknown input case '" + flags.inputs + "'");
    ec.cases = {*ic};
  }
  ec.train = c.train;
  ec.seed = c.seed;
  ec.threads = c.threads;

  const auto corpus = load_corpus(c, true);
  const GazeForest forest = readiness_forest(corpus, ctx);
  const auto prepared = prepare(corpus, forest, c);
  const std::vector<Window> windows = corpus_windows(prepared, c.window_length, c.stride);
  if (param == SweepParameter::BatchSize) plan_folds(windows.size(), c.n_folds, c);
  ExperimentReport report = sweep(windows, param, c.sweep_values, c.n_folds, c.val_size, c.test_size, ec);
  stamp(report, ctx, windows.size());
  for (const std::string& d : report.diagnostics) ctx.out << "sweep: " << d << '\n';
  print_written(ctx, emit_report(report, output_dir(ctx).string(), report_format(c), "sweep"));
  return kExitOk;
}

// --- argument handling -----------------------------------------------------

struct Command {
  CLI::App* app;
  bool needs_data;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Driver readiness pipeline: features, gaze zones, readiness labels and LSTM regressors.", "drm"};
  app.require_subcommand(1, 1);
  app.fallthrough(false);
  Flags flags;
  std::map<std::string, CLI::Option*> seed_opts;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON run configuration file");
    seed_opts[sub->get_name()] = sub->add_option("--seed", flags.seed, "Master seed (overrides the config)");
    sub->add_option("--out", flags.out, "Output directory (overrides the config)");
    sub->add_option("--format", flags.format, "Report format: csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--data", flags.data, "Directory of *.lmks.jsonl sessions and *.ratings.csv files");
  };
  auto add_forest = [&](CLI::App* sub) {
    sub->add_option("--forest", flags.forest, "Gaze forest file; trained from the data when omitted");
  };

  std::vector<Command> commands;
  auto* synth = app.add_subcommand("synth", "Write the synthetic benchmark corpus (15 sessions, 2 raters each)");
  add_common(synth);
  commands.push_back({synth, false});

  auto* features = app.add_subcommand("features", "Per-frame EAR and gaze-ratio tables");
  add_common(features);
  add_data(features);
  commands.push_back({features, true});

  auto* gaze = app.add_subcommand("train-gaze", "Train and test the gaze-zone random forest");
  add_common(gaze);
  add_data(gaze);
  gaze->add_option("--case", flags.gaze_case, "Classifier features: head or head+eye");
  commands.push_back({gaze, true});

  auto* label = app.add_subcommand("label", "Interpolate per-frame readiness from the interval ratings");
  add_common(label);
  add_data(label);
  commands.push_back({label, true});

  auto* train = app.add_subcommand("train-readiness", "Run the architecture x input-case x fold ablation");
  add_common(train);
  add_data(train);
  add_forest(train);
  commands.push_back({train, true});

  auto* evaluate = app.add_subcommand("evaluate", "Score a readiness model file on a data directory");
  add_common(evaluate);
  add_data(evaluate);
  add_forest(evaluate);
  evaluate->add_option("--model", flags.model, "Readiness model file");
  commands.push_back({evaluate, true});

  auto* sw = app.add_subcommand("sweep", "Fold-count or batch-size sweep");
  add_common(sw);
  add_data(sw);
  add_forest(sw);
  sw->add_option("--param", flags.param, "folds or batch_size")->check(CLI::IsMember({"folds", "batch_size"}));
  sw->add_option("--values", flags.values, "Comma-separated sweep values")->delimiter(',');
  sw->add_option("--arch", flags.arch, "vanilla or bidirectional (default bidirectional)");
  sw->add_option("--inputs", flags.inputs, "head, gaze or both (default both)");
  commands.push_back({sw, true});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const Command* cmd = nullptr;
  for (const Command& c : commands)
    if (c.app->parsed()) cmd = &c;
  const std::string name = cmd->app->get_name();

  try {
    RunConfig config = flags.config.empty() ? RunConfig{} : RunConfig::load(flags.config);
    if (seed_opts.at(name)->count() > 0) config.seed = flags.seed;
    if (!flags.out.empty()) config.out_dir = flags.out;
    if (!flags.format.empty()) config.format = flags.format;
    if (!flags.data.empty()) config.data_dir = flags.data;
    if (!flags.forest.empty()) config.forest_path = flags.forest;
    if (!flags.model.empty()) config.model_path = flags.model;
    if (!flags.param.empty()) config.sweep_parameter = flags.param;
    if (!flags.values.empty()) config.sweep_values = flags.values;
    if (!flags.gaze_case.empty()) {
      const auto fc = parse_feature_case(flags.gaze_case);
      if (!fc) throw ConfigError("unknown --case '" + flags.gaze_case + "' (expected head or head+eye)");
      config.gaze_case = *fc;
    }
    config.validate();
    if (config.out_dir.empty()) throw ConfigError("--out is required");
    if (cmd->needs_data && config.data_dir.empty()) throw ConfigError("--data is required");

    const Context ctx{config, config.hash(), out};
    if (name == "synth") return cmd_synth(ctx);
    if (name == "features") return cmd_features(ctx);
    if (name == "train-gaze") return cmd_train_gaze(ctx);
    if (name == "label") return cmd_label(ctx);
    if (name == "train-readiness") return cmd_train_readiness(ctx);
    if (name == "evaluate") return cmd_evaluate(ctx);
    return cmd_sweep(ctx, flags);
  } catch (const ConfigError& e) {
    err << "drm " << name << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "drm " << name << ": " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace drm::cli
