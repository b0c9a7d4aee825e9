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

#include "drm/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "drm/error.hpp"

namespace drm {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool blank(std::string_view s) { return trim(s).empty(); }

bool pose_in_range(double a) { return std::isfinite(a) && a >= -180.0 && a <= 180.0; }

double number_at(const json& j, std::size_t line, const char* what) {
  if (!j.is_number()) throw ParseError(std::string("malformed line: ") + what + " must be numeric", line);
  return j.get<double>();
}

LandmarkFrame parse_frame(const json& j, std::size_t line) {
  if (!j.is_object()) throw ParseError("malformed line: expected a JSON object", line);
  LandmarkFrame f;

  const auto frame = j.find("frame");
  if (frame == j.end() || !frame->is_number_integer() || frame->get<long long>() < 0)
    throw ParseError("malformed line: 'frame' must be a non-negative integer", line);
  f.frame_index = frame->get<std::size_t>();

  const auto pose = j.find("pose");
  if (pose == j.end() || !pose->is_array() || pose->size() != 3)
    throw ParseError("malformed line: 'pose' must be [yaw, pitch, roll]", line);
  f.head_pose = {number_at((*pose)[0], line, "pose"), number_at((*pose)[1], line, "pose"),
                 number_at((*pose)[2], line, "pose")};
  for (double a : {f.head_pose.yaw, f.head_pose.pitch, f.head_pose.roll}) {
    if (!pose_in_range(a)) throw ParseError("out-of-range pose angle " + std::to_string(a), line);
  }

  const auto pts = j.find("pts");
  if (pts == j.end() || !pts->is_array()) throw ParseError("malformed line: missing 'pts' array", line);
  if (pts->size() != 2 * kNumLandmarks) {
    throw ParseError("wrong point count: expected " + std::to_string(kNumLandmarks) + " points, got " +
                         std::to_string(pts->size() / 2) + (pts->size() % 2 ? ".5" : ""),
                     line);
  }
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    f.points[i] = {number_at((*pts)[2 * i], line, "pts"), number_at((*pts)[2 * i + 1], line, "pts")};
  }

  if (const auto zone = j.find("zone"); zone != j.end() && !zone->is_null()) {
    if (!zone->is_string()) throw ParseError("malformed line: 'zone' must be a string", line);
    f.zone_label = parse_zone(zone->get<std::string>());
    if (!f.zone_label) throw ParseError("unknown gaze zone '" + zone->get<std::string>() + "'", line);
  }
  return f;
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
  s = trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

SessionRecording parse_session(std::istream& in) {
  SessionRecording session;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;

  struct Numbered {
    LandmarkFrame frame;
    std::size_t line;
  };
  std::vector<Numbered> frames;

  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed line: ") + e.what(), line_no);
    }
    if (!have_header) {
      if (!j.is_object() || !j.contains("session_id") || !j["session_id"].is_string())
        throw ParseError("malformed header: expected {\"session_id\", \"fps\"}", line_no);
      session.session_id = j["session_id"].get<std::string>();
      if (j.contains("fps")) session.fps = number_at(j["fps"], line_no, "fps");
      if (!(session.fps > 0.0) || !std::isfinite(session.fps)) throw ParseError("fps must be positive", line_no);
      have_header = true;
      continue;
    }
    frames.push_back({parse_frame(j, line_no), line_no});
  }
  if (!have_header) throw ParseError("empty session file", line_no);
  if (frames.empty()) throw ParseError("session has no frames", line_no);

  std::stable_sort(frames.begin(), frames.end(),
                   [](const Numbered& a, const Numbered& b) { return a.frame.frame_index < b.frame.frame_index; });
  if (frames.front().frame.frame_index != 0)
    throw ParseError("session must start at frame 0, first frame is " +
                         std::to_string(frames.front().frame.frame_index),
                     frames.front().line);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const std::size_t prev = frames[i - 1].frame.frame_index;
    const std::size_t cur = frames[i].frame.frame_index;
    if (cur == prev) throw ParseError("duplicate frame_index " + std::to_string(cur), frames[i].line);
    if (cur != prev + 1)
      throw ParseError("frame gap: missing frame " + std::to_string(prev + 1), frames[i].line);
  }

  session.frames.reserve(frames.size());
  for (auto& f : frames) session.frames.push_back(std::move(f.frame));
  return session;
}

RatingSet parse_ratings(std::istream& in, double interval_seconds) {
  if (!(interval_seconds > 0.0)) throw Error("interval_seconds must be positive");
  RatingSet set;
  set.interval_seconds = interval_seconds;

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<std::pair<std::size_t, int>> rows;
  std::vector<std::size_t> row_lines;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (!have_header) {
      if (view != "rater_id,interval,rating")
        throw ParseError("expected header 'rater_id,interval,rating'", line_no);
      have_header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      fields.push_back(view.substr(start, comma == std::string_view::npos ? view.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 3) throw ParseError("malformed row: expected 3 fields", line_no);
    const std::string rater(trim(fields[0]));
    if (rater.empty()) throw ParseError("empty rater_id", line_no);
    if (set.rater_id.empty()) {
      set.rater_id = rater;
    } else if (rater != set.rater_id) {
      throw ParseError("mixed rater ids '" + set.rater_id + "' and '" + rater + "'", line_no);
    }
    std::size_t interval = 0;
    int rating = 0;
    if (!parse_int(fields[1], interval)) throw ParseError("malformed interval index", line_no);
    if (!parse_int(fields[2], rating)) throw ParseError("malformed rating", line_no);
    if (rating < 1 || rating > 5)
      throw ParseError("rating " + std::to_string(rating) + " outside 1..5", line_no);
    rows.emplace_back(interval, rating);
    row_lines.push_back(line_no);
  }
  if (!have_header) throw ParseError("empty ratings file", line_no);
  if (rows.empty()) throw ParseError("ratings file has no rows", line_no);

  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a].first < rows[b].first; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& [interval, rating] = rows[order[k]];
    if (interval != k) {
      throw ParseError(interval < k ? "duplicate interval " + std::to_string(interval)
                                    : "non-contiguous intervals: missing interval " + std::to_string(k),
                       row_lines[order[k]]);
    }
    set.ratings.push_back(rating);
  }
  return set;
}

std::vector<Diagnostic> validate_session(const SessionRecording& session) {
  std::vector<Diagnostic> out;
  if (!(session.fps > 0.0) || !std::isfinite(session.fps)) out.push_back({std::nullopt, "fps must be positive"});
  if (session.frames.empty()) {
    out.push_back({std::nullopt, "session has no frames"});
    return out;
  }
  if (session.frames.front().frame_index != 0)
    out.push_back({session.frames.front().frame_index, "session does not start at frame 0"});
  for (std::size_t i = 0; i < session.frames.size(); ++i) {
    const LandmarkFrame& f = session.frames[i];
    const HeadPose& p = f.head_pose;
    if (!pose_in_range(p.yaw)) out.push_back({f.frame_index, "yaw out of range [-180, 180]"});
    if (!pose_in_range(p.pitch)) out.push_back({f.frame_index, "pitch out of range [-180, 180]"});
    if (!pose_in_range(p.roll)) out.push_back({f.frame_index, "roll out of range [-180, 180]"});
    for (const Point2& pt : f.points) {
      if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) {
        out.push_back({f.frame_index, "non-finite landmark coordinate"});
        break;
      }
    }
    if (i > 0) {
      const std::size_t prev = session.frames[i - 1].frame_index;
      if (f.frame_index <= prev) {
        out.push_back({f.frame_index, "frame_index not strictly increasing"});
      } else if (f.frame_index != prev + 1) {
        for (std::size_t missing = prev + 1; missing < f.frame_index; ++missing)
          out.push_back({missing, "gap: frame " + std::to_string(missing) + " missing"});
      }
    }
  }
  return out;
}

std::size_t complete_intervals(const SessionRecording& session, double interval_seconds) {
  const double frames_per_interval = session.fps * interval_seconds;
  // Tolerate representation error so 360 frames at 30 fps give exactly six 2 s intervals.
  return static_cast<std::size_t>(std::floor(static_cast<double>(session.frames.size()) / frames_per_interval + 1e-9));
}

void check_rating_coverage(const SessionRecording& session, const RatingSet& ratings) {
  const std::size_t expected = complete_intervals(session, ratings.interval_seconds);
  if (ratings.ratings.size() != expected) {
    throw Error("rater '" + ratings.rater_id + "' has " + std::to_string(ratings.ratings.size()) +
                " intervals but session '" + session.session_id + "' spans " + std::to_string(expected) +
                " complete intervals");
  }
}

void write_session(std::ostream& out, const SessionRecording& session,
                   const std::vector<std::pair<std::string, std::string>>& extra_header) {
  json header = {{"session_id", session.session_id}, {"fps", session.fps}};
  for (const auto& [k, v] : extra_header) header[k] = v;
  out << header.dump() << '\n';
  for (const LandmarkFrame& f : session.frames) {
    json pts = json::array();
    for (const Point2& p : f.points) {
      pts.push_back(p.x);
      pts.push_back(p.y);
    }
    json j = {{"frame", f.frame_index},
              {"pose", {f.head_pose.yaw, f.head_pose.pitch, f.head_pose.roll}},
              {"pts", std::move(pts)}};
    if (f.zone_label) j["zone"] = to_string(*f.zone_label);
    out << j.dump() << '\n';
  }
}

void write_ratings(std::ostream& out, const RatingSet& ratings, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "rater_id,interval,rating\n";
  for (std::size_t k = 0; k < ratings.ratings.size(); ++k)
    out << ratings.rater_id << ',' << k << ',' << ratings.ratings[k] << '\n';
}

SessionRecording load_session(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open session file '" + path + "'");
  try {
    return parse_session(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

RatingSet load_ratings(const std::string& path, double interval_seconds) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ratings file '" + path + "'");
  try {
    return parse_ratings(in, interval_seconds);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

}  // namespace drm
