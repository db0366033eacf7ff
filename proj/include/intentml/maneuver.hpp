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

#ifndef INTENTML_MANEUVER_HPP_
#define INTENTML_MANEUVER_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace intentml {

// Intersection maneuver classes. The numeric order (S, L, R, P) is the class
// order used on every probability row and on both confusion-matrix axes.
enum class Maneuver : std::uint8_t {
  kStraight = 0,
  kLeft = 1,
  kRight = 2,
  kStop = 3,
};

inline constexpr int kNumClasses = 4;

inline constexpr char maneuver_char(Maneuver m) {
  switch (m) {
    case Maneuver::kStraight: return 'S';
    case Maneuver::kLeft: return 'L';
    case Maneuver::kRight: return 'R';
    case Maneuver::kStop: return 'P';
  }
  return '?';
}

inline constexpr const char* maneuver_name(Maneuver m) {
  switch (m) {
    case Maneuver::kStraight: return "Straight";
    case Maneuver::kLeft: return "Left";
    case Maneuver::kRight: return "Right";
    case Maneuver::kStop: return "Stop";
  }
  return "?";
}

inline std::optional<Maneuver> maneuver_from_char(char c) {
  switch (c) {
    case 'S': return Maneuver::kStraight;
    case 'L': return Maneuver::kLeft;
    case 'R': return Maneuver::kRight;
    case 'P': return Maneuver::kStop;
    default: return std::nullopt;
  }
}

inline Maneuver maneuver_from_index(int i) {
  if (i < 0 || i >= kNumClasses) {
    throw std::out_of_range("maneuver index out of range");
  }
  return static_cast<Maneuver>(i);
}

}  // namespace intentml

#endif  // INTENTML_MANEUVER_HPP_
