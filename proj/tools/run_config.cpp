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

#include "run_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "drm/rng.hpp"

namespace drm::cli {

using nlohmann::json;

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

// Reads an object section, rejecting keys outside `allowed`.
class Section {
 public:
  Section(const json& j, std::string path, std::set<std::string> allowed) : path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError("config: '" + path_ + "' must be an object");
    for (const auto& [k, v] : j.items()) {
      if (!allowed.count(k)) throw ConfigError("config: unknown key '" + prefix() + k + "'");
    }
    j_ = &j;
  }

  template <typename T>
  void get(const char* key, T& out) const {
    if (!j_->contains(key)) return;
    try {
      out = j_->at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config: '" + prefix() + key + "' has the wrong type");
    }
  }

  template <typename T>
  void get_optional(const char* key, std::optional<T>& out) const {
    if (!j_->contains(key)) return;
    if (j_->at(key).is_null()) {
      out.reset();
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

  const json* child(const char* key) const { return j_->contains(key) ? &j_->at(key) : nullptr; }
  std::string child_path(const char* key) const { return prefix() + key; }

 private:
  std::string prefix() const { return path_.empty() ? "" : path_ + "."; }
  std::string path_;
  const json* j_ = nullptr;
};

}  // namespace

json RunConfig::to_json() const {
  json archs = json::array(), cs = json::array();
  for (Architecture a : architectures) archs.push_back(drm::to_string(a));
  for (InputCase c : cases) cs.push_back(drm::to_string(c));
  return {
      {"seed", seed},
      {"data_dir", data_dir},
      {"out_dir", out_dir},
      {"format", format},
      {"gaze",
       {{"case", drm::to_string(gaze_case)},
        {"train_ratio", train_ratio},
        {"chronological", chronological_split},
        {"forest_path", forest_path},
        {"forest",
         {{"n_trees", forest.n_trees},
          {"max_depth", opt(forest.max_depth)},
          {"min_samples_leaf", forest.min_samples_leaf},
          {"features_per_split", forest.features_per_split},
          {"bootstrap", forest.bootstrap}}}}},
      {"ground_truth", {{"interval_seconds", interval_seconds}, {"clamp", spline_clamp}}},
      {"windows", {{"length", window_length}, {"stride", stride}}},
      {"folds", {{"n_folds", n_folds}, {"val_size", val_size}, {"test_size", test_size}}},
      {"train",
       {{"learning_rate", train.learning_rate},
        {"batch_size", train.batch_size},
        {"max_epochs", train.max_epochs},
        {"beta1", train.beta1},
        {"beta2", train.beta2},
        {"epsilon", train.epsilon},
        {"hidden", opt(train.hidden)}}},
      {"experiment", {{"architectures", archs}, {"cases", cs}, {"threads", threads}}},
      {"sweep", {{"parameter", sweep_parameter}, {"values", sweep_values}}},
      {"model_path", model_path},
  };
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  const Section top(j, "",
                    {"seed", "data_dir", "out_dir", "format", "gaze", "ground_truth", "windows", "folds", "train",
                     "experiment", "sweep", "model_path"});
  top.get("seed", c.seed);
  top.get("data_dir", c.data_dir);
  top.get("out_dir", c.out_dir);
  top.get("format", c.format);
  top.get("model_path", c.model_path);

  if (const json* g = top.child("gaze")) {
    const Section s(*g, "gaze", {"case", "train_ratio", "chronological", "forest_path", "forest"});
    std::string name = drm::to_string(c.gaze_case);
    s.get("case", name);
    const auto fc = parse_feature_case(name);
    if (!fc) throw ConfigError("config: unknown gaze case '" + name + "'");
    c.gaze_case = *fc;
    s.get("train_ratio", c.train_ratio);
    s.get("chronological", c.chronological_split);
    s.get("forest_path", c.forest_path);
    if (const json* f = s.child("forest")) {
      const Section fs(*f, "gaze.forest",
                       {"n_trees", "max_depth", "min_samples_leaf", "features_per_split", "bootstrap"});
      fs.get("n_trees", c.forest.n_trees);
      fs.get_optional("max_depth", c.forest.max_depth);
      fs.get("min_samples_leaf", c.forest.min_samples_leaf);
      fs.get("features_per_split", c.forest.features_per_split);
      fs.get("bootstrap", c.forest.bootstrap);
    }
  }
  if (const json* g = top.child("ground_truth")) {
    const Section s(*g, "ground_truth", {"interval_seconds", "clamp"});
    s.get("interval_seconds", c.interval_seconds);
    s.get("clamp", c.spline_clamp);
  }
  if (const json* w = top.child("windows")) {
    const Section s(*w, "windows", {"length", "stride"});
    s.get("length", c.window_length);
    s.get("stride", c.stride);
  }
  if (const json* f = top.child("folds")) {
    const Section s(*f, "folds", {"n_folds", "val_size", "test_size"});
    s.get("n_folds", c.n_folds);
    s.get("val_size", c.val_size);
    s.get("test_size", c.test_size);
  }
  if (const json* t = top.child("train")) {
    const Section s(*t, "train", {"learning_rate", "batch_size", "max_epochs", "beta1", "beta2", "epsilon", "hidden"});
    s.get("learning_rate", c.train.learning_rate);
    s.get("batch_size", c.train.batch_size);
    s.get("max_epochs", c.train.max_epochs);
    s.get("beta1", c.train.beta1);
    s.get("beta2", c.train.beta2);
    s.get("epsilon", c.train.epsilon);
    s.get_optional("hidden", c.train.hidden);
  }
  if (const json* e = top.child("experiment")) {
    const Section s(*e, "experiment", {"architectures", "cases", "threads"});
    s.get("threads", c.threads);
    std::vector<std::string> names;
    if (s.child("architectures")) {
      s.get("architectures", names);
      c.architectures.clear();
      for (const std::string& n : names) {
        const auto a = parse_architecture(n);
        if (!a) throw ConfigError("config: unknown architecture '" + n + "'");
        c.architectures.push_back(*a);
      }
    }
    if (s.child("cases")) {
      names.clear();
      s.get("cases", names);
      c.cases.clear();
      for (const std::string& n : names) {
        const auto ic = parse_input_case(n);
        if (!ic) throw ConfigError("config: unknown input case '" + n + "'");
        c.cases.push_back(*ic);
      }
    }
  }
  if (const json* sw = top.child("sweep")) {
    const Section s(*sw, "sweep", {"parameter", "values"});
    s.get("parameter", c.sweep_parameter);
    s.get("values", c.sweep_values);
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return from_json(j);
}

std::string RunConfig::hash() const {
  json j = to_json();
  j.erase("data_dir");
  j.erase("out_dir");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

void RunConfig::validate() const {
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json, got '" + format + "'");
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw ConfigError("gaze.train_ratio must be in (0, 1)");
  if (forest.n_trees < 1) throw ConfigError("gaze.forest.n_trees must be >= 1");
  if (forest.min_samples_leaf < 1) throw ConfigError("gaze.forest.min_samples_leaf must be >= 1");
  if (!(interval_seconds > 0.0)) throw ConfigError("ground_truth.interval_seconds must be > 0");
  if (window_length < 1 || stride < 1) throw ConfigError("windows.length and windows.stride must be >= 1");
  if (val_size < 1 || test_size < 1) throw ConfigError("folds.val_size and folds.test_size must be >= 1");
  if (threads < 1) throw ConfigError("experiment.threads must be >= 1");
  if (architectures.empty() || cases.empty()) throw ConfigError("experiment needs at least one architecture and case");
  if (sweep_parameter != "folds" && sweep_parameter != "batch_size")
    throw ConfigError("sweep.parameter must be folds or batch_size");
  try {
    train.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace drm::cli
