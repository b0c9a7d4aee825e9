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

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "drm/csv.hpp"
#include "drm/error.hpp"
#include "drm/eval.hpp"

namespace drm {

namespace {

using nlohmann::json;

constexpr const char* kReportHeader =
    "arch,case,fold,test_mae,baseline_mae,best_epoch,agg,std_mae,sweep_param,sweep_value";

template <typename T>
std::string opt_field(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return format_double(*v);
  } else {
    return std::to_string(*v);
  }
}

template <typename T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> opt_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

template <typename T>
std::optional<T> opt_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return static_cast<T>(std::stoll(s));
}

template <typename T>
std::optional<T> opt_from_json(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  for (const auto& [k, v] : report.metadata) out << "# " << k << '=' << v << '\n';
  for (const std::string& d : report.diagnostics) out << "# diagnostic=" << d << '\n';
  out << kReportHeader << '\n';
  for (const ReportRow& r : report.rows) {
    out << r.arch << ',' << r.feature_case << ',' << opt_field(r.fold) << ',' << format_double(r.test_mae) << ','
        << opt_field(r.baseline_mae) << ',' << opt_field(r.best_epoch) << ',' << (r.agg ? "true" : "false") << ','
        << opt_field(r.std_mae) << ',' << r.sweep_param << ',' << opt_field(r.sweep_value) << '\n';
  }
}

void write_report_json(std::ostream& out, const ExperimentReport& report) {
  json rows = json::array();
  for (const ReportRow& r : report.rows) {
    rows.push_back({{"arch", r.arch},
                    {"case", r.feature_case},
                    {"fold", opt_json(r.fold)},
                    {"test_mae", r.test_mae},
                    {"baseline_mae", opt_json(r.baseline_mae)},
                    {"best_epoch", opt_json(r.best_epoch)},
                    {"agg", r.agg},
                    {"std_mae", opt_json(r.std_mae)},
                    {"sweep_param", r.sweep_param},
                    {"sweep_value", opt_json(r.sweep_value)}});
  }
  json j = {{"metadata", report.metadata}, {"diagnostics", report.diagnostics}, {"rows", std::move(rows)}};
  out << j.dump(1) << '\n';
}

ExperimentReport read_report_csv(std::istream& in) {
  ExperimentReport report;
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string body = line.substr(line.find_first_not_of("# "));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      if (body.compare(0, eq, "diagnostic") == 0) {
        report.diagnostics.push_back(body.substr(eq + 1));
      } else {
        report.metadata[body.substr(0, eq)] = body.substr(eq + 1);
      }
      continue;
    }
    if (!header) {
      if (line != kReportHeader) throw ParseError("unexpected report header", line_no);
      header = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 10) throw ParseError("report row must have 10 fields", line_no);
    try {
      ReportRow r;
      r.arch = f[0];
      r.feature_case = f[1];
      r.fold = opt_int<std::size_t>(f[2]);
      r.test_mae = parse_double(f[3]);
      r.baseline_mae = opt_double(f[4]);
      r.best_epoch = opt_int<std::size_t>(f[5]);
      if (f[6] != "true" && f[6] != "false") throw Error("agg must be true or false");
      r.agg = f[6] == "true";
      r.std_mae = opt_double(f[7]);
      r.sweep_param = f[8];
      r.sweep_value = opt_int<long long>(f[9]);
      report.rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!header) throw ParseError("report has no header", line_no);
  return report;
}

ExperimentReport read_report_json(std::istream& in) {
  ExperimentReport report;
  try {
    const json j = json::parse(in);
    report.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    report.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    for (const json& jr : j.at("rows")) {
      ReportRow r;
      r.arch = jr.at("arch").get<std::string>();
      r.feature_case = jr.at("case").get<std::string>();
      r.fold = opt_from_json<std::size_t>(jr, "fold");
      r.test_mae = jr.at("test_mae").get<double>();
      r.baseline_mae = opt_from_json<double>(jr, "baseline_mae");
      r.best_epoch = opt_from_json<std::size_t>(jr, "best_epoch");
      r.agg = jr.at("agg").get<bool>();
      r.std_mae = opt_from_json<double>(jr, "std_mae");
      r.sweep_param = jr.at("sweep_param").get<std::string>();
      r.sweep_value = opt_from_json<long long>(jr, "sweep_value");
      report.rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("report json: ") + e.what(), 0);
  }
  return report;
}

void write_traces_csv(std::ostream& out, std::span<const PredictionTrace> traces) {
  out << "arch,case,fold,window,truth,prediction\n";
  for (const PredictionTrace& t : traces) {
    for (std::size_t i = 0; i < t.truth.size(); ++i) {
      out << t.arch << ',' << t.feature_case << ',' << t.fold << ','
          << (i < t.window_index.size() ? std::to_string(t.window_index[i]) : std::string()) << ','
          << format_double(t.truth[i]) << ',' << format_double(t.prediction[i]) << '\n';
    }
  }
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m) {
  out << "true";
  for (std::size_t k = 0; k < kNumZones; ++k) out << ",pred_" << to_string(zone_at(k));
  out << '\n';
  for (std::size_t r = 0; r < kNumZones; ++r) {
    out << to_string(zone_at(r));
    for (std::size_t c = 0; c < kNumZones; ++c) out << ',' << m.counts[r][c];
    out << '\n';
  }
}

void write_correlation_csv(std::ostream& out, const std::array<std::optional<double>, kNumZones>& r) {
  out << "zone,pearson_r\n";
  for (std::size_t k = 0; k < kNumZones; ++k) out << to_string(zone_at(k)) << ',' << opt_field(r[k]) << '\n';
}

void write_variability_csv(std::ostream& out, const std::array<std::optional<ClassStats>, 5>& stats) {
  out << "class,mean_hr,std_hr,frames\n";
  for (std::size_t c = 0; c < stats.size(); ++c) {
    out << c + 1 << ',';
    if (stats[c]) {
      out << format_double(stats[c]->mean) << ',' << format_double(stats[c]->std) << ',' << stats[c]->count;
    } else {
      out << ",,0";
    }
    out << '\n';
  }
}

std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& dir, ReportFormat format,
                                     const std::string& stem) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());

  std::vector<std::string> written;
  auto open = [&](const std::string& name) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + path + "': " + std::strerror(errno));
    written.push_back(path);
    return f;
  };

  {
    auto f = open(stem + (format == ReportFormat::Csv ? ".csv" : ".json"));
    if (format == ReportFormat::Csv) {
      write_report_csv(f, report);
    } else {
      write_report_json(f, report);
    }
    if (!f) throw Error("failed writing '" + written.back() + "'");
  }
  if (!report.traces.empty()) {
    auto f = open(stem + "_traces.csv");
    write_traces_csv(f, report.traces);
    if (!f) throw Error("failed writing '" + written.back() + "'");
  }
  return written;
}

}  // namespace drm
