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

#ifndef INTENTML_METRICS_HPP_
#define INTENTML_METRICS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "intentml/discretizer.hpp"
#include "intentml/maneuver.hpp"

namespace intentml {

// 4x4 counts, ground truth on rows, predictions on columns, class order
// (S, L, R, P) on both axes.
struct ConfusionMatrix {
  std::array<std::int64_t, kNumClasses * kNumClasses> counts{};

  std::int64_t& at(Maneuver truth, Maneuver pred) {
    return counts[static_cast<int>(truth) * kNumClasses +
                  static_cast<int>(pred)];
  }
  std::int64_t at(Maneuver truth, Maneuver pred) const {
    return counts[static_cast<int>(truth) * kNumClasses +
                  static_cast<int>(pred)];
  }
  void add(Maneuver truth, Maneuver pred) { ++at(truth, pred); }

  std::int64_t total() const;
  std::int64_t row_sum(Maneuver truth) const;   // T_P + F_N
  std::int64_t col_sum(Maneuver pred) const;    // T_P + F_P
  std::int64_t diagonal() const;
};

struct MetricsReport {
  std::array<double, kNumClasses> precision{};
  std::array<double, kNumClasses> recall{};
  std::array<double, kNumClasses> f1{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  // Majority-vote-per-sequence accuracy; negative when not applicable
  // (e.g. when the report was derived from a bare confusion matrix).
  double sequence_accuracy = -1.0;
  std::int64_t scored_steps = 0;
};

// Seeded, stratified split: each class lands in the train side at
// round(train_fraction * class size), clamped so both sides keep at least
// one sequence per class. Throws when a present class has < 2 sequences.
std::pair<std::vector<SymbolSequence>, std::vector<SymbolSequence>>
split_dataset(const std::vector<SymbolSequence>& sequences,
              double train_fraction, std::uint64_t seed);

// Per-timestep counts over aligned prediction/truth label sequences.
ConfusionMatrix confusion(
    const std::vector<std::vector<Maneuver>>& predictions,
    const std::vector<std::vector<Maneuver>>& truth);

// P = T_P / (T_P + F_P), R = T_P / (T_P + F_N), F1 = 2PR / (P + R);
// degenerate 0/0 cases resolve to 0.
double precision(const ConfusionMatrix& cm, Maneuver cls);
double recall(const ConfusionMatrix& cm, Maneuver cls);
double f1_score(const ConfusionMatrix& cm, Maneuver cls);

// diagonal / total; throws on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

// Per-class values plus their unweighted means.
MetricsReport macro_metrics(const ConfusionMatrix& cm);

// Smallest t such that predictions[t..t+k-1] all equal truth; nullopt when
// no such window exists. Throws when k < 1 or k > length.
std::optional<int> earliest_stable_step(std::span<const Maneuver> predictions,
                                        Maneuver truth, int k = 10);

Maneuver majority_vote(std::span<const Maneuver> predictions);

// Report renderers. All output is deterministic: fixed-width formatting, no
// timestamps.
std::string render_report_text(const MetricsReport& report,
                               const ConfusionMatrix& cm);
std::string render_report_flat(const MetricsReport& report);  // key,value lines
std::string render_confusion_csv(const ConfusionMatrix& cm);

}  // namespace intentml

#endif  // INTENTML_METRICS_HPP_
