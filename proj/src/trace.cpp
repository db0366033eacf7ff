// Copyright 2026 The intentml Authors
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

#include "intentml/errors.hpp"

#include "intentml/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "intentml/rng.hpp"

namespace intentml {

namespace {

constexpr std::string_view kCsvHeader =
    "id,step,velocity,yaw_rate,acceleration,label";

void append_double(std::string& out, double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

double lerp(double a, double b, double frac) { return a + (b - a) * frac; }

double turn_velocity_profile(const SynthConfig& cfg, int t) {
  if (t < cfg.turn_decel_start) return cfg.cruise_speed;
  if (t < cfg.turn_onset) {
    const double frac = static_cast<double>(t - cfg.turn_decel_start) /
                        (cfg.turn_onset - cfg.turn_decel_start);
    return lerp(cfg.cruise_speed, cfg.turn_speed, frac);
  }
  if (t <= cfg.turn_offset) return cfg.turn_speed;
  if (t < cfg.turn_recover_end) {
    const double frac = static_cast<double>(t - cfg.turn_offset) /
                        (cfg.turn_recover_end - cfg.turn_offset);
    return lerp(cfg.turn_speed, cfg.cruise_speed, frac);
  }
  return cfg.cruise_speed;
}

// Triangular pulse peaking at +/- turn_peak_yaw mid-window.
double turn_yaw_profile(const SynthConfig& cfg, int t, double sign) {
  if (t < cfg.turn_onset || t > cfg.turn_offset) return 0.0;
  const double w = cfg.turn_offset - cfg.turn_onset;
  const double pos = (t - cfg.turn_onset) / w;
  return sign * cfg.turn_peak_yaw * (1.0 - std::abs(2.0 * pos - 1.0));
}

double stop_velocity_profile(const SynthConfig& cfg, int t) {
  if (t < cfg.stop_decel_start) return cfg.cruise_speed;
  const double v =
      cfg.cruise_speed - cfg.stop_decel * cfg.dt * (t - cfg.stop_decel_start);
  return std::max(0.0, v);
}

void profile_at(const SynthConfig& cfg, Maneuver m, int t, double& velocity,
                double& yaw) {
  switch (m) {
    case Maneuver::kStraight:
      velocity = cfg.cruise_speed;
      yaw = 0.0;
      return;
    case Maneuver::kLeft:
      velocity = turn_velocity_profile(cfg, t);
      yaw = turn_yaw_profile(cfg, t, -1.0);
      return;
    case Maneuver::kRight:
      velocity = turn_velocity_profile(cfg, t);
      yaw = turn_yaw_profile(cfg, t, +1.0);
      return;
    case Maneuver::kStop:
      velocity = stop_velocity_profile(cfg, t);
      yaw = 0.0;
      return;
  }
  throw std::invalid_argument("invalid maneuver enum");
}

[[noreturn]] void csv_error(const std::string& path, std::size_t line,
                            const std::string& what) {
  std::ostringstream oss;
  oss << path << ":" << line << ": " << what;
  throw ParseError(oss.str());
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool parse_double(std::string_view s, double& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

bool parse_int(std::string_view s, long long& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

std::int64_t SynthConfig::count(Maneuver m) const {
  switch (m) {
    case Maneuver::kStraight: return count_straight;
    case Maneuver::kLeft: return count_left;
    case Maneuver::kRight: return count_right;
    case Maneuver::kStop: return count_stop;
  }
  throw std::invalid_argument("invalid maneuver enum");
}

std::int64_t SynthConfig::total_count() const {
  return count_straight + count_stop + count_right + count_left;
}

void SynthConfig::validate() const {
  const double finite_fields[] = {dt,         cruise_speed,
                                  turn_speed, turn_peak_yaw,
                                  stop_decel, velocity_noise_sigma,
                                  yaw_noise_sigma};
  for (double f : finite_fields) {
    if (!std::isfinite(f)) {
      throw std::invalid_argument("synth config: non-finite parameter");
    }
  }
  if (count_straight <= 0 || count_stop <= 0 || count_right <= 0 ||
      count_left <= 0) {
    throw std::invalid_argument("synth config: class counts must be > 0");
  }
  if (length < 1) throw std::invalid_argument("synth config: length must be >= 1");
  if (dt <= 0.0) throw std::invalid_argument("synth config: dt must be > 0");
  if (cruise_speed <= 0.0 || turn_speed < 0.0) {
    throw std::invalid_argument("synth config: speeds must be positive");
  }
  if (turn_peak_yaw <= 3.0) {
    throw std::invalid_argument(
        "synth config: turn peak yaw-rate must exceed 3 rad/s");
  }
  if (stop_decel <= 0.0) {
    throw std::invalid_argument("synth config: stop deceleration must be > 0");
  }
  if (velocity_noise_sigma < 0.0 || yaw_noise_sigma < 0.0) {
    throw std::invalid_argument("synth config: noise sigmas must be >= 0");
  }
  if (!(0 < turn_decel_start && turn_decel_start < turn_onset &&
        turn_onset < turn_offset && turn_offset < turn_recover_end &&
        turn_recover_end <= length)) {
    throw std::invalid_argument(
        "synth config: turn profile indices must satisfy 0 < decel_start < "
        "onset < offset < recover_end <= length");
  }
  if (!(0 < stop_decel_start && stop_decel_start < length)) {
    throw std::invalid_argument(
        "synth config: stop_decel_start must lie inside the trace");
  }
}

ManeuverTrace synth_trace(Maneuver maneuver, const SynthConfig& cfg,
                          std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);

  ManeuverTrace trace;
  trace.maneuver = maneuver;
  trace.dt = cfg.dt;
  trace.velocity.resize(cfg.length);
  trace.yaw_rate.resize(cfg.length);
  trace.acceleration.resize(cfg.length);

  // Draw order per step is velocity then yaw-rate; part of the determinism
  // contract.
  for (int t = 0; t < cfg.length; ++t) {
    double v = 0.0, y = 0.0;
    profile_at(cfg, maneuver, t, v, y);
    v += rng.normal(0.0, cfg.velocity_noise_sigma);
    y += rng.normal(0.0, cfg.yaw_noise_sigma);
    trace.velocity[t] = std::max(0.0, v);
    trace.yaw_rate[t] = y;
  }

  // Acceleration is the forward difference of the stored velocity; it is
  // carried in the CSV but never used as a model input.
  if (cfg.length >= 2) {
    for (int t = 0; t + 1 < cfg.length; ++t) {
      trace.acceleration[t] =
          (trace.velocity[t + 1] - trace.velocity[t]) / cfg.dt;
    }
    trace.acceleration[cfg.length - 1] = trace.acceleration[cfg.length - 2];
  } else {
    trace.acceleration[0] = 0.0;
  }
  return trace;
}

std::vector<ManeuverTrace> synth_dataset(const SynthConfig& cfg) {
  cfg.validate();
  // Emission order follows the count fields: S, P, R, L.
  const Maneuver order[] = {Maneuver::kStraight, Maneuver::kStop,
                            Maneuver::kRight, Maneuver::kLeft};
  std::vector<ManeuverTrace> out;
  out.reserve(static_cast<std::size_t>(cfg.total_count()));
  for (Maneuver m : order) {
    const std::int64_t n = cfg.count(m);
    for (std::int64_t i = 0; i < n; ++i) {
      const std::uint64_t trace_seed =
          mix_seed(cfg.seed, (static_cast<std::uint64_t>(m) << 32) |
                                 static_cast<std::uint64_t>(i));
      ManeuverTrace t = synth_trace(m, cfg, trace_seed);
      char id[24];
      std::snprintf(id, sizeof(id), "%c%04lld", maneuver_char(m),
                    static_cast<long long>(i));
      t.id = id;
      out.push_back(std::move(t));
    }
  }
  return out;
}

void save_traces_csv(const std::vector<ManeuverTrace>& traces,
                     const std::string& path) {
  std::string body(kCsvHeader);
  body.push_back('\n');
  for (const ManeuverTrace& trace : traces) {
    const char label = maneuver_char(trace.maneuver);
    for (int t = 0; t < trace.length(); ++t) {
      body += trace.id;
      body.push_back(',');
      append_double(body, static_cast<double>(t));
      body.push_back(',');
      append_double(body, trace.velocity[t]);
      body.push_back(',');
      append_double(body, trace.yaw_rate[t]);
      body.push_back(',');
      append_double(body, trace.acceleration[t]);
      body.push_back(',');
      body.push_back(label);
      body.push_back('\n');
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<ManeuverTrace> load_traces_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": no traces");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    // Name the first expected column that is absent.
    const auto have = split(line, ',');
    for (std::string_view want : split(kCsvHeader, ',')) {
      if (std::find(have.begin(), have.end(), want) == have.end()) {
        csv_error(path, 1, "missing column '" + std::string(want) + "'");
      }
    }
    csv_error(path, 1, "unexpected header '" + line + "'");
  }

  std::vector<ManeuverTrace> traces;
  std::unordered_map<std::string, std::size_t> index_of;
  std::string last_id;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 6) {
      csv_error(path, line_no, "expected 6 fields, got " +
                                   std::to_string(fields.size()));
    }
    const std::string id(fields[0]);
    if (id.empty()) csv_error(path, line_no, "empty id");

    long long step = 0;
    double v = 0.0, y = 0.0, a = 0.0;
    if (!parse_int(fields[1], step)) csv_error(path, line_no, "bad step");
    if (!parse_double(fields[2], v) || !std::isfinite(v)) {
      csv_error(path, line_no, "bad velocity");
    }
    if (v < 0.0) csv_error(path, line_no, "negative velocity");
    if (!parse_double(fields[3], y) || !std::isfinite(y)) {
      csv_error(path, line_no, "bad yaw_rate");
    }
    if (!parse_double(fields[4], a) || !std::isfinite(a)) {
      csv_error(path, line_no, "bad acceleration");
    }
    if (fields[5].size() != 1) csv_error(path, line_no, "bad label");
    const auto label = maneuver_from_char(fields[5][0]);
    if (!label) {
      csv_error(path, line_no,
                "bad label '" + std::string(fields[5]) + "'");
    }

    auto it = index_of.find(id);
    if (it == index_of.end()) {
      index_of.emplace(id, traces.size());
      ManeuverTrace t;
      t.id = id;
      t.maneuver = *label;
      traces.push_back(std::move(t));
      it = index_of.find(id);
    } else if (id != last_id) {
      csv_error(path, line_no, "rows for id '" + id + "' are not contiguous");
    }
    last_id = id;

    ManeuverTrace& t = traces[it->second];
    if (step != t.length()) {
      csv_error(path, line_no,
                "step " + std::to_string(step) + " for id '" + id +
                    "', expected " + std::to_string(t.length()));
    }
    if (*label != t.maneuver) {
      csv_error(path, line_no, "label changes within id '" + id + "'");
    }
    t.velocity.push_back(v);
    t.yaw_rate.push_back(y);
    t.acceleration.push_back(a);
  }
  if (traces.empty()) throw ParseError(path + ": no traces");
  return traces;
}

}  // namespace intentml
