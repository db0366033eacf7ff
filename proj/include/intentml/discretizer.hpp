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

#ifndef INTENTML_DISCRETIZER_HPP_
#define INTENTML_DISCRETIZER_HPP_

#include <string>
#include <vector>

#include "intentml/maneuver.hpp"
#include "intentml/trace.hpp"

namespace intentml {

struct DiscretizerConfig {
  double velocity_threshold = 10.0;  // m/s
  double yaw_low = -3.0;             // rad/s
  double yaw_high = 3.0;             // rad/s

  void validate() const;  // yaw_low < yaw_high, velocity_threshold > 0
};

// Discretized trace: symbols over {1..6} with an aligned per-step label.
struct SymbolSequence {
  std::string id;
  std::vector<int> symbols;
  std::vector<Maneuver> labels;

  int length() const { return static_cast<int>(symbols.size()); }
};

inline constexpr int kVocabSize = 6;

// 0 if v < threshold, 1 if v >= threshold. Throws on non-finite input.
int discretize_velocity(double v, const DiscretizerConfig& cfg);

// 0 if y < yaw_low, 1 if yaw_low <= y <= yaw_high (both boundaries
// inclusive), 2 if y > yaw_high. Throws on non-finite input.
int discretize_yaw(double y, const DiscretizerConfig& cfg);

// symbol = 3 * velocity_class + yaw_class + 1; a bijection between
// {0,1}x{0,1,2} and {1..6} with (0,0)->1 and (0,1)->2.
int symbolize(int velocity_class, int yaw_class);

// Element-wise discretization; the trace label is copied to every step.
SymbolSequence symbolize_trace(const ManeuverTrace& trace,
                               const DiscretizerConfig& cfg);

std::vector<SymbolSequence> symbolize_traces(
    const std::vector<ManeuverTrace>& traces, const DiscretizerConfig& cfg);

// Symbol file format, one line per sequence:
//   id<TAB>symbols as space-separated ints<TAB>labels as space-separated letters
void save_symbols_tsv(const std::vector<SymbolSequence>& sequences,
                      const std::string& path);
std::vector<SymbolSequence> load_symbols_tsv(const std::string& path);

}  // namespace intentml

#endif  // INTENTML_DISCRETIZER_HPP_
