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

#ifndef INTENTML_TRACE_HPP_
#define INTENTML_TRACE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "intentml/maneuver.hpp"

namespace intentml {

// Continuous telemetry for one intersection pass. Acceleration is carried for
// completeness (and round-trips through the CSV format) but is never fed to
// any model.
struct ManeuverTrace {
  std::string id;
  Maneuver maneuver = Maneuver::kStraight;
  double dt = 0.1;  // seconds per step
  std::vector<double> velocity;      // m/s, entries >= 0
  std::vector<double> yaw_rate;      // rad/s, positive right / negative left
  std::vector<double> acceleration;  // m/s^2

  int length() const { return static_cast<int>(velocity.size()); }
};

// Parameters of the synthetic maneuver generator. Profiles are piecewise
// linear (constant -> ramp -> constant) plus Gaussian noise:
//   Straight: velocity holds cruise_speed, yaw-rate holds 0.
//   Left/Right: velocity ramps cruise -> turn_speed over
//     [turn_decel_start, turn_onset], holds through [turn_onset, turn_offset],
//     ramps back to cruise by turn_recover_end; yaw-rate is a triangular pulse
//     over [turn_onset, turn_offset] peaking at -/+ turn_peak_yaw.
//   Stop: velocity ramps down at stop_decel from stop_decel_start and clamps
//     at 0; yaw-rate holds 0.
struct SynthConfig {
  // Class counts, listed in the generator's emission order (S, P, R, L).
  std::int64_t count_straight = 990;
  std::int64_t count_stop = 770;
  std::int64_t count_right = 660;
  std::int64_t count_left = 550;

  int length = 110;  // steps (11 s at dt = 0.1 s)
  double dt = 0.1;

  double cruise_speed = 13.0;    // m/s
  double turn_speed = 6.5;       // m/s held through the turn window
  double turn_peak_yaw = 4.5;    // rad/s magnitude; must exceed 3
  double stop_decel = 13.0 / 3.5;  // m/s^2

  int turn_decel_start = 30;
  int turn_onset = 45;
  int turn_offset = 65;
  int turn_recover_end = 85;
  int stop_decel_start = 20;

  double velocity_noise_sigma = 0.3;  // m/s
  double yaw_noise_sigma = 0.2;       // rad/s

  std::uint64_t seed = 1;

  std::int64_t count(Maneuver m) const;
  std::int64_t total_count() const;

  // Throws std::invalid_argument on non-finite parameters, non-positive
  // counts, a turn peak that a +/-3 rad/s discretizer could not see, or
  // profile indices that do not fit in [0, length).
  void validate() const;
};

// Synthesizes one noise-perturbed trace. Deterministic in (maneuver, cfg,
// seed). The id is left empty; synth_dataset assigns ids.
ManeuverTrace synth_trace(Maneuver maneuver, const SynthConfig& cfg,
                          std::uint64_t seed);

// Synthesizes cfg.count(m) traces per class, each from a distinct seed
// derived from cfg.seed. Ids are "<class char><index>", e.g. "S0012".
std::vector<ManeuverTrace> synth_dataset(const SynthConfig& cfg);

// CSV schema (exact header, in order):
//   id,step,velocity,yaw_rate,acceleration,label
// One row per timestep, label in {S,L,R,P}, steps contiguous from 0 per id.
// Floats are emitted shortest-round-trip, so load(save(x)) == x exactly.
void save_traces_csv(const std::vector<ManeuverTrace>& traces,
                     const std::string& path);

// Throws std::runtime_error naming the offending row/column on malformed
// rows, missing columns, inconsistent lengths or labels per id, and on an
// empty file ("no traces").
std::vector<ManeuverTrace> load_traces_csv(const std::string& path);

}  // namespace intentml

#endif  // INTENTML_TRACE_HPP_
