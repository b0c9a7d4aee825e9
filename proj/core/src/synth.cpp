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

#include "drm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "drm/error.hpp"
#include "drm/features.hpp"
#include "drm/rng.hpp"

namespace drm {

namespace {

// clang-format off
constexpr std::array<ZoneProfile, kNumZones> kProfiles{{
    {GazeZone::G0, "left mirror",    {-40.0,  0.0, 0.0}, 0.85, 0.50, 4.0, -60.0, -25.0, -20.0, 20.0},
    {GazeZone::G1, "left window",    {-35.0,  5.0, 0.0}, 0.50, 0.45, 3.0, -55.0, -20.0, -15.0, 25.0},
    {GazeZone::G2, "front",          {  0.0,  0.0, 0.0}, 0.50, 0.50, 5.0, -15.0,  15.0, -15.0, 15.0},
    {GazeZone::G3, "centre mirror",  { 20.0, -12.0, 0.0}, 0.30, 0.20, 4.0,   5.0,  35.0, -30.0,  0.0},
    {GazeZone::G4, "front right",    { 10.0,  0.0, 0.0}, 0.25, 0.50, 4.0,  -5.0,  25.0, -15.0, 15.0},
    {GazeZone::G5, "right mirror",   { 45.0,  0.0, 0.0}, 0.15, 0.50, 3.0,  30.0,  60.0, -15.0, 15.0},
    {GazeZone::G6, "right window",   { 40.0,  5.0, 0.0}, 0.50, 0.45, 2.0,  25.0,  55.0, -10.0, 20.0},
    {GazeZone::G7, "infotainment",   { 25.0, 25.0, 0.0}, 0.40, 0.80, 2.0,  10.0,  40.0,  10.0, 40.0},
    {GazeZone::G8, "steering wheel", {  0.0, 30.0, 0.0}, 0.50, 0.85, 2.0, -15.0,  15.0,  15.0, 45.0},
}};
// clang-format on

constexpr double kEyeWidth = 40.0;
constexpr Point2 kFaceCentre{640.0, 360.0};

std::array<TemplatePoint, kNumLandmarks> build_template() {
  std::array<TemplatePoint, kNumLandmarks> t{};
  const double pi = std::numbers::pi;
  // Jaw line 0..32, ear to ear under the chin.
  for (int i = 0; i <= 32; ++i) {
    const double a = pi * i / 32.0;
    t[i] = {-95.0 * std::cos(a), 10.0 + 110.0 * std::sin(a), -50.0 * std::cos(a) * std::cos(a) - 10.0};
  }
  // Brows 33..41 (right), 42..50 (left).
  for (int i = 0; i < 9; ++i) {
    const double u = i / 8.0;
    const double arch = -62.0 - 8.0 * std::sin(pi * u);
    t[33 + i] = {-75.0 + 50.0 * u, arch, 5.0};
    t[42 + i] = {25.0 + 50.0 * u, arch, 5.0};
  }
  // Nose bridge 51..54, base 55..59.
  for (int i = 0; i < 4; ++i) t[51 + i] = {0.0, -35.0 + 14.0 * i, 10.0 + 7.0 * i};
  for (int i = 0; i < 5; ++i) t[55 + i] = {-16.0 + 8.0 * i, 22.0 - (i == 2 ? 3.0 : 0.0), 22.0};
  // Eyes: corner, upper lid x3, corner, lower lid x3.
  const double h = kOpenEar * kEyeWidth / 2.0;
  auto eye = [&](int base, double cx, int ref_sign) {
    const double w = kEyeWidth / 2.0;
    t[base + 0] = {cx + ref_sign * w, -20.0, 0.0};
    t[base + 1] = {cx + ref_sign * w * 0.5, -20.0 - h * 0.8, 0.0};
    t[base + 2] = {cx, -20.0 - h, 0.0};
    t[base + 3] = {cx - ref_sign * w * 0.5, -20.0 - h * 0.8, 0.0};
    t[base + 4] = {cx - ref_sign * w, -20.0, 0.0};
    t[base + 5] = {cx - ref_sign * w * 0.5, -20.0 + h * 0.8, 0.0};
    t[base + 6] = {cx, -20.0 + h, 0.0};
    t[base + 7] = {cx + ref_sign * w * 0.5, -20.0 + h * 0.8, 0.0};
  };
  eye(60, -45.0, -1);
  eye(68, 45.0, -1);
  // Mouth: outer 76..87, inner 88..95.
  for (int i = 0; i < 12; ++i) {
    const double a = 2.0 * pi * i / 12.0;
    t[76 + i] = {-30.0 * std::cos(a), 60.0 - 12.0 * std::sin(a), 15.0};
  }
  for (int i = 0; i < 8; ++i) {
    const double a = 2.0 * pi * i / 8.0;
    t[88 + i] = {-20.0 * std::cos(a), 60.0 - 5.0 * std::sin(a), 14.0};
  }
  t[96] = {-45.0, -20.0, 2.0};
  t[97] = {45.0, -20.0, 2.0};
  return t;
}

Point2 project(const TemplatePoint& p, const HeadPose& pose) {
  const double deg = std::numbers::pi / 180.0;
  const double cy = std::cos(pose.yaw * deg), sy = std::sin(pose.yaw * deg);
  const double cp = std::cos(pose.pitch * deg), sp = std::sin(pose.pitch * deg);
  const double cr = std::cos(pose.roll * deg), sr = std::sin(pose.roll * deg);
  // Yaw about the vertical axis, then pitch, then in-plane roll.
  const double x1 = cy * p.x + sy * p.z;
  const double z1 = -sy * p.x + cy * p.z;
  const double y2 = cp * p.y - sp * z1;
  const double x3 = cr * x1 - sr * y2;
  const double y3 = sr * x1 + cr * y2;
  return {kFaceCentre.x + x3, kFaceCentre.y + y3};
}

void shape_eye(LandmarkSet& pts, const EyeLandmarks& eye, double ear) {
  const Point2 a = pts[eye.corner_ref], b = pts[eye.corner_far];
  const Point2 mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  // Unit normal pointing up in image coordinates.
  double nx = -dy / len, ny = dx / len;
  if (ny > 0.0) {
    nx = -nx;
    ny = -ny;
  }
  const double half = ear * len / 2.0;
  pts[eye.top] = {mid.x + nx * half, mid.y + ny * half};
  pts[eye.bottom] = {mid.x - nx * half, mid.y - ny * half};
}

void collapse_eye(LandmarkSet& pts, const EyeLandmarks& eye) {
  const Point2 a = pts[eye.top], b = pts[eye.bottom];
  pts[eye.top] = pts[eye.bottom] = {(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
}

void place_pupil(LandmarkSet& pts, const EyeLandmarks& eye, double hr, double vr) {
  const Point2 ref = pts[eye.corner_ref], far = pts[eye.corner_far];
  const Point2 top = pts[eye.top], bottom = pts[eye.bottom];
  pts[eye.pupil] = {ref.x + hr * (far.x - ref.x), top.y + vr * (bottom.y - top.y)};
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

int round_rating(double v) { return readiness_class(v); }

}  // namespace

const ZoneProfile& zone_profile(GazeZone zone) { return kProfiles.at(index_of(zone)); }

const std::array<TemplatePoint, kNumLandmarks>& face_template() {
  static const std::array<TemplatePoint, kNumLandmarks> t = build_template();
  return t;
}

Segment zone_segment(GazeZone zone, double dwell_s, bool eyes_closed) {
  const ZoneProfile& p = zone_profile(zone);
  Segment s;
  s.zone = zone;
  s.pose = p.pose;
  s.hr = p.hr;
  s.vr = p.vr;
  s.dwell_s = dwell_s;
  s.ear = eyes_closed ? kClosedEar : kOpenEar;
  s.readiness = eyes_closed ? kMinReadiness : p.readiness;
  return s;
}

void Scenario::validate() const {
  if (!(fps > 0.0)) throw Error("scenario: fps must be > 0");
  if (!(duration_s > 0.0)) throw Error("scenario: duration must be > 0");
  if (!(interval_seconds > 0.0)) throw Error("scenario: interval must be > 0");
  if (script.empty()) throw Error("scenario: script is empty");
  if (!(landmark_jitter_px >= 0.0)) throw Error("scenario: landmark jitter must be >= 0");
  if (!(readiness_lag_s >= 0.0)) throw Error("scenario: readiness lag must be >= 0");
  if (!in_unit(rater2_offset_fraction)) throw Error("scenario: rater-2 offset fraction must be in [0, 1]");
  if (!in_unit(annotate_fraction)) throw Error("scenario: annotate fraction must be in [0, 1]");
  double total = 0.0;
  for (std::size_t k = 0; k < script.size(); ++k) {
    const Segment& s = script[k];
    const ZoneProfile& p = zone_profile(s.zone);
    const std::string where = "scenario segment " + std::to_string(k) + " (" + to_string(s.zone) + "): ";
    if (!(s.dwell_s > 0.0)) throw Error(where + "dwell must be > 0");
    if (s.pose.yaw < p.yaw_lo || s.pose.yaw > p.yaw_hi || s.pose.pitch < p.pitch_lo || s.pose.pitch > p.pitch_hi)
      throw Error(where + "head pose target is incompatible with the zone's pose range");
    if (std::abs(s.pose.roll) > 30.0) throw Error(where + "roll must be within +-30 degrees");
    if (!(s.pose_jitter >= 0.0) || !(s.ratio_jitter >= 0.0)) throw Error(where + "jitter must be >= 0");
    if (!(s.ear >= 0.0 && s.ear <= 1.0)) throw Error(where + "eye openness must be in [0, 1]");
    if (!in_unit(s.hr) || !in_unit(s.vr)) throw Error(where + "gaze ratios must be in [0, 1]");
    if (!(s.readiness >= kMinReadiness && s.readiness <= kMaxReadiness))
      throw Error(where + "readiness must be in [1, 5]");
    total += s.dwell_s;
  }
  if (std::abs(total - duration_s) > 1e-9) throw Error("scenario: segments do not tile the duration");
}

SyntheticSession generate_session(const Scenario& sc, std::uint64_t seed) {
  sc.validate();
  Rng pose_rng(derive_seed(seed, "synth/pose"));
  Rng point_rng(derive_seed(seed, "synth/landmarks"));
  Rng ratio_rng(derive_seed(seed, "synth/ratios"));
  Rng label_rng(derive_seed(seed, "synth/labels"));
  Rng rater_rng(derive_seed(seed, "synth/rater2"));

  const auto n_frames = static_cast<std::size_t>(std::llround(sc.duration_s * sc.fps));
  const auto& tmpl = face_template();

  SyntheticSession out;
  out.session.session_id = sc.session_id;
  out.session.fps = sc.fps;
  out.session.frames.reserve(n_frames);
  out.zones.reserve(n_frames);
  out.latent.fps = sc.fps;
  out.latent.interval_seconds = sc.interval_seconds;
  out.latent.rater_ids = {"latent"};
  out.latent.values.reserve(n_frames);

  const double alpha = sc.readiness_lag_s > 0.0 ? 1.0 - std::exp(-1.0 / (sc.fps * sc.readiness_lag_s)) : 1.0;
  std::size_t seg = 0;
  double seg_end = sc.script[0].dwell_s;
  double latent = sc.script[0].readiness;

  for (std::size_t i = 0; i < n_frames; ++i) {
    const double t = static_cast<double>(i) / sc.fps;
    while (t >= seg_end - 1e-9 && seg + 1 < sc.script.size()) seg_end += sc.script[++seg].dwell_s;
    const Segment& s = sc.script[seg];

    LandmarkFrame f;
    f.frame_index = i;
    f.head_pose = {s.pose.yaw + pose_rng.normal(0.0, s.pose_jitter), s.pose.pitch + pose_rng.normal(0.0, s.pose_jitter),
                   s.pose.roll + pose_rng.normal(0.0, s.pose_jitter * 0.25)};
    for (std::size_t k = 0; k < kNumLandmarks; ++k) f.points[k] = project(tmpl[k], f.head_pose);
    shape_eye(f.points, kRightEye, s.ear);
    shape_eye(f.points, kLeftEye, s.ear);
    for (std::size_t k = 0; k < 96; ++k) {
      f.points[k].x += point_rng.normal(0.0, sc.landmark_jitter_px);
      f.points[k].y += point_rng.normal(0.0, sc.landmark_jitter_px);
    }
    if (s.collapse_left_eye) collapse_eye(f.points, kLeftEye);
    const double hr = std::clamp(s.hr + ratio_rng.normal(0.0, s.ratio_jitter), 0.0, 1.0);
    const double vr = std::clamp(s.vr + ratio_rng.normal(0.0, s.ratio_jitter), 0.0, 1.0);
    place_pupil(f.points, kRightEye, hr, vr);
    place_pupil(f.points, kLeftEye, hr, vr);
    if (label_rng.bernoulli(sc.annotate_fraction)) f.zone_label = s.zone;

    latent = i == 0 ? s.readiness : latent + alpha * (s.readiness - latent);
    out.latent.values.push_back(latent);
    out.zones.push_back(s.zone);
    out.session.frames.push_back(std::move(f));
  }

  const std::size_t n_intervals = complete_intervals(out.session, sc.interval_seconds);
  const double per_interval = sc.fps * sc.interval_seconds;
  RatingSet r1{"rater1", sc.interval_seconds, {}};
  RatingSet r2{"rater2", sc.interval_seconds, {}};
  for (std::size_t k = 0; k < n_intervals; ++k) {
    const auto hi = std::min(n_frames, static_cast<std::size_t>(std::llround(per_interval * static_cast<double>(k + 1))));
    const int rating = round_rating(out.latent.values[hi - 1]);
    r1.ratings.push_back(rating);
    r2.ratings.push_back(rater_rng.bernoulli(sc.rater2_offset_fraction) ? std::min(rating + 1, 5) : rating);
  }
  out.ratings = {std::move(r1), std::move(r2)};
  return out;
}

std::vector<Scenario> benchmark_scenarios(std::uint64_t seed) {
  constexpr std::size_t kSessions = 15;
  constexpr std::size_t kSegments = 6;
  Rng rng(derive_seed(seed, "synth/benchmark/script"));

  // Ten passes over the nine zones, each pass in its own shuffled order, so
  // that every zone appears equally often.
  std::vector<GazeZone> order;
  for (std::size_t pass = 0; pass < (kSessions * kSegments + kNumZones - 1) / kNumZones; ++pass) {
    std::array<GazeZone, kNumZones> z{};
    for (std::size_t k = 0; k < kNumZones; ++k) z[k] = zone_at(k);
    for (std::size_t k = kNumZones - 1; k > 0; --k) std::swap(z[k], z[rng.below(k + 1)]);
    order.insert(order.end(), z.begin(), z.end());
  }

  std::vector<Scenario> out;
  for (std::size_t s = 0; s < kSessions; ++s) {
    Scenario sc;
    sc.session_id = "synth_s" + std::string(s < 10 ? "0" : "") + std::to_string(s);
    sc.annotate_fraction = 0.41;
    for (std::size_t j = 0; j < kSegments; ++j) {
      const std::size_t g = s * kSegments + j;
      const bool closed = g % 8 == 5;
      Segment seg = zone_segment(order[g], 2.0, closed);
      seg.pose.yaw += rng.uniform(-3.0, 3.0);
      seg.pose.pitch += rng.uniform(-3.0, 3.0);
      sc.script.push_back(seg);
    }
    out.push_back(std::move(sc));
  }
  return out;
}

std::vector<SyntheticSession> generate_benchmark(std::uint64_t seed) {
  const std::vector<Scenario> scenarios = benchmark_scenarios(seed);
  std::vector<SyntheticSession> out;
  out.reserve(scenarios.size());
  for (std::size_t k = 0; k < scenarios.size(); ++k)
    out.push_back(generate_session(scenarios[k], derive_seed(seed, "synth/session/" + std::to_string(k))));
  return out;
}

}  // namespace drm
