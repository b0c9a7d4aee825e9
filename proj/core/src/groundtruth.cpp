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

#include "drm/groundtruth.hpp"

#include <algorithm>
#include <cmath>

#include "drm/csv.hpp"
#include "drm/error.hpp"

namespace drm {

std::vector<double> merge_ratings(std::span<const RatingSet> rating_sets) {
  if (rating_sets.empty()) throw Error("merge_ratings: no rating sets");
  const RatingSet& first = rating_sets.front();
  for (const RatingSet& r : rating_sets) {
    if (r.ratings.size() != first.ratings.size())
      throw Error("merge_ratings: rater '" + r.rater_id + "' has " + std::to_string(r.ratings.size()) +
                  " intervals, expected " + std::to_string(first.ratings.size()));
    if (r.interval_seconds != first.interval_seconds)
      throw Error("merge_ratings: mismatched interval durations");
  }
  std::vector<double> means(first.ratings.size(), 0.0);
  for (std::size_t k = 0; k < means.size(); ++k) {
    double sum = 0.0;
    for (const RatingSet& r : rating_sets) sum += r.ratings[k];
    means[k] = sum / static_cast<double>(rating_sets.size());
  }
  return means;
}

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw Error("NaturalCubicSpline: need >= 2 knots with matching values");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw Error("NaturalCubicSpline: knots must be strictly increasing");

  // Tridiagonal system for interior second derivatives (Thomas algorithm).
  m_.assign(n, 0.0);
  if (n == 2) return;
  const std::size_t k = n - 2;
  std::vector<double> diag(k), upper(k), rhs(k);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    diag[i - 1] = 2.0 * (h0 + h1);
    upper[i - 1] = h1;
    rhs[i - 1] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (std::size_t i = 1; i < k; ++i) {
    const double lower = x_[i + 1] - x_[i];  // h_{i}, sub-diagonal of row i
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i >= 1; --i) m_[i] = (rhs[i - 1] - upper[i - 1] * m_[i + 1]) / diag[i - 1];
}

double NaturalCubicSpline::operator()(double t) const {
  if (t <= x_.front()) return y_.front();
  if (t >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double a = x_[i + 1] - t;
  const double b = t - x_[i];
  return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) + (y_[i] / h - m_[i] * h / 6.0) * a +
         (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
}

ReadinessSeries interpolate_readiness(std::span<const double> interval_means, double interval_seconds, double fps,
                                      std::size_t frame_count, InterpolationOptions options) {
  if (interval_means.size() < 2) throw Error("interpolate_readiness: need at least 2 intervals");
  if (!(fps > 0.0) || !(interval_seconds > 0.0)) throw Error("interpolate_readiness: fps and interval must be positive");
  std::vector<double> x(interval_means.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = static_cast<double>(k + 1) * interval_seconds;
  const NaturalCubicSpline spline(std::move(x), std::vector<double>(interval_means.begin(), interval_means.end()));

  ReadinessSeries s;
  s.fps = fps;
  s.interval_seconds = interval_seconds;
  s.values.resize(frame_count);
  for (std::size_t i = 0; i < frame_count; ++i) {
    const double v = spline(static_cast<double>(i) / fps);
    s.values[i] = options.clamp ? std::clamp(v, kMinReadiness, kMaxReadiness) : v;
  }
  return s;
}

ReadinessSeries readiness_for_session(const SessionRecording& session, std::span<const RatingSet> ratings,
                                      InterpolationOptions options) {
  if (ratings.empty()) throw Error("session '" + session.session_id + "' has no ratings");
  for (const RatingSet& r : ratings) check_rating_coverage(session, r);
  ReadinessSeries s = interpolate_readiness(merge_ratings(ratings), ratings.front().interval_seconds, session.fps,
                                            session.frames.size(), options);
  for (const RatingSet& r : ratings) s.rater_ids.push_back(r.rater_id);
  return s;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw Error("pearson: need equal lengths >= 2");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw Error("pearson: correlation undefined for a constant series");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

int readiness_class(double readiness) {
  return std::clamp(static_cast<int>(std::floor(readiness + 0.5)), 1, 5);
}

std::array<std::optional<ClassStats>, 5> gaze_variability_by_class(std::span<const double> ratio,
                                                                   std::span<const double> readiness) {
  if (ratio.size() != readiness.size()) throw Error("gaze_variability_by_class: length mismatch");
  // Sums are taken relative to each class's first value.
  std::array<double, 5> shift{}, sum{}, count{}, mean{};
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    const auto c = static_cast<std::size_t>(readiness_class(readiness[i]) - 1);
    if (count[c] == 0.0) shift[c] = ratio[i];
    sum[c] += ratio[i] - shift[c];
    count[c] += 1.0;
  }
  for (std::size_t c = 0; c < 5; ++c)
    if (count[c] > 0.0) mean[c] = shift[c] + sum[c] / count[c];
  std::array<double, 5> sq{};
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    const auto c = static_cast<std::size_t>(readiness_class(readiness[i]) - 1);
    const double d = ratio[i] - mean[c];
    sq[c] += d * d;
  }
  std::array<std::optional<ClassStats>, 5> out;
  for (std::size_t c = 0; c < 5; ++c) {
    if (count[c] == 0.0) continue;
    out[c] = ClassStats{mean[c], std::sqrt(sq[c] / count[c]), static_cast<std::size_t>(count[c])};
  }
  return out;
}

std::array<std::optional<double>, kNumZones> zone_readiness_correlation(std::span<const GazeZone> zones,
                                                                        std::span<const double> readiness) {
  if (zones.size() != readiness.size()) throw Error("zone_readiness_correlation: length mismatch");
  std::array<std::optional<double>, kNumZones> out;
  std::vector<double> indicator(zones.size());
  for (std::size_t z = 0; z < kNumZones; ++z) {
    bool any_on = false, any_off = false;
    for (std::size_t i = 0; i < zones.size(); ++i) {
      indicator[i] = index_of(zones[i]) == z ? 1.0 : 0.0;
      (indicator[i] > 0.0 ? any_on : any_off) = true;
    }
    if (!any_on || !any_off) continue;
    try {
      out[z] = pearson(indicator, readiness);
    } catch (const Error&) {
      // constant readiness: correlation undefined
    }
  }
  return out;
}

void write_readiness_csv(std::ostream& out, const ReadinessSeries& series, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "frame,readiness\n";
  for (std::size_t i = 0; i < series.values.size(); ++i) out << i << ',' << format_double(series.values[i]) << '\n';
}

ReadinessSeries read_readiness_csv(std::istream& in, double fps) {
  ReadinessSeries s;
  s.fps = fps;
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#' || line == "\r") continue;
    if (!header) {
      if (line.rfind("frame,readiness", 0) != 0) throw ParseError("expected header 'frame,readiness'", line_no);
      header = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 2) throw ParseError("expected 2 fields", line_no);
    try {
      if (static_cast<std::size_t>(parse_double(f[0])) != s.values.size())
        throw ParseError("frames must be consecutive from 0", line_no);
      s.values.push_back(parse_double(f[1]));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!header) throw ParseError("empty readiness file", line_no);
  return s;
}

}  // namespace drm
