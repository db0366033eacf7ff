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

#include "intentml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "intentml/rng.hpp"

namespace intentml {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t s = 0;
  for (std::int64_t c : counts) s += c;
  return s;
}

std::int64_t ConfusionMatrix::row_sum(Maneuver truth) const {
  std::int64_t s = 0;
  for (int p = 0; p < kNumClasses; ++p) {
    s += at(truth, maneuver_from_index(p));
  }
  return s;
}

std::int64_t ConfusionMatrix::col_sum(Maneuver pred) const {
  std::int64_t s = 0;
  for (int t = 0; t < kNumClasses; ++t) {
    s += at(maneuver_from_index(t), pred);
  }
  return s;
}

std::int64_t ConfusionMatrix::diagonal() const {
  std::int64_t s = 0;
  for (int i = 0; i < kNumClasses; ++i) {
    const Maneuver m = maneuver_from_index(i);
    s += at(m, m);
  }
  return s;
}

std::pair<std::vector<SymbolSequence>, std::vector<SymbolSequence>>
split_dataset(const std::vector<SymbolSequence>& sequences,
              double train_fraction, std::uint64_t seed) {
  if (sequences.empty()) {
    throw std::invalid_argument("split: empty dataset");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split: train fraction must be in (0,1)");
  }

  // Class of a sequence = its (constant) per-step label; sequences synthesized
  // here are single-maneuver, real data is labeled the same way.
  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    if (sequences[i].labels.empty()) {
      throw std::invalid_argument("split: sequence without labels");
    }
    by_class[static_cast<int>(sequences[i].labels.front())].push_back(i);
  }

  Rng rng(seed);
  std::vector<SymbolSequence> train, test;
  // Fixed class order keeps the split deterministic.
  for (int c = 0; c < kNumClasses; ++c) {
    auto& idx = by_class[c];
    if (idx.empty()) continue;
    if (idx.size() < 2) {
      throw std::invalid_argument(
          std::string("split: class ") +
          maneuver_char(maneuver_from_index(c)) +
          " has fewer than 2 sequences");
    }
    rng.shuffle(idx);
    auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(idx.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      (k < n_train ? train : test).push_back(sequences[idx[k]]);
    }
  }
  return {std::move(train), std::move(test)};
}

ConfusionMatrix confusion(
    const std::vector<std::vector<Maneuver>>& predictions,
    const std::vector<std::vector<Maneuver>>& truth) {
  if (predictions.size() != truth.size()) {
    throw std::invalid_argument("confusion: sequence count mismatch");
  }
  ConfusionMatrix cm;
  for (std::size_t s = 0; s < predictions.size(); ++s) {
    if (predictions[s].size() != truth[s].size()) {
      throw std::invalid_argument("confusion: sequence length mismatch");
    }
    for (std::size_t t = 0; t < predictions[s].size(); ++t) {
      cm.add(truth[s][t], predictions[s][t]);
    }
  }
  return cm;
}

double precision(const ConfusionMatrix& cm, Maneuver cls) {
  const std::int64_t tp = cm.at(cls, cls);
  const std::int64_t denom = cm.col_sum(cls);  // T_P + F_P
  return denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

double recall(const ConfusionMatrix& cm, Maneuver cls) {
  const std::int64_t tp = cm.at(cls, cls);
  const std::int64_t denom = cm.row_sum(cls);  // T_P + F_N
  return denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

double f1_score(const ConfusionMatrix& cm, Maneuver cls) {
  const double p = precision(cm, cls);
  const double r = recall(cm, cls);
  return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double accuracy(const ConfusionMatrix& cm) {
  const std::int64_t total = cm.total();
  if (total == 0) throw std::invalid_argument("accuracy: empty matrix");
  return static_cast<double>(cm.diagonal()) / static_cast<double>(total);
}

MetricsReport macro_metrics(const ConfusionMatrix& cm) {
  MetricsReport r;
  for (int c = 0; c < kNumClasses; ++c) {
    const Maneuver m = maneuver_from_index(c);
    r.precision[c] = precision(cm, m);
    r.recall[c] = recall(cm, m);
    r.f1[c] = f1_score(cm, m);
    r.macro_precision += r.precision[c];
    r.macro_recall += r.recall[c];
    r.macro_f1 += r.f1[c];
  }
  r.macro_precision /= kNumClasses;
  r.macro_recall /= kNumClasses;
  r.macro_f1 /= kNumClasses;
  r.accuracy = accuracy(cm);
  r.scored_steps = cm.total();
  return r;
}

std::optional<int> earliest_stable_step(std::span<const Maneuver> predictions,
                                        Maneuver truth, int k) {
  if (k < 1) throw std::invalid_argument("earliest_stable_step: k must be >= 1");
  const int n = static_cast<int>(predictions.size());
  if (k > n) {
    throw std::invalid_argument(
        "earliest_stable_step: k longer than the sequence");
  }
  int run = 0;
  for (int t = 0; t < n; ++t) {
    run = predictions[t] == truth ? run + 1 : 0;
    if (run >= k) return t - k + 1;
  }
  return std::nullopt;
}

Maneuver majority_vote(std::span<const Maneuver> predictions) {
  if (predictions.empty()) {
    throw std::invalid_argument("majority_vote: empty predictions");
  }
  std::array<std::int64_t, kNumClasses> tally{};
  for (Maneuver m : predictions) ++tally[static_cast<int>(m)];
  int best = 0;
  for (int c = 1; c < kNumClasses; ++c) {
    if (tally[c] > tally[best]) best = c;  // ties keep the lower class index
  }
  return maneuver_from_index(best);
}

namespace {

void append_kv(std::string& out, const char* key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s,%.6f\n", key, value);
  out += buf;
}

}  // namespace

std::string render_report_text(const MetricsReport& report,
                               const ConfusionMatrix& cm) {
  std::string out;
  out += "confusion matrix (rows = ground truth, cols = predictions)\n";
  out += "         ";
  for (int c = 0; c < kNumClasses; ++c) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%8c", maneuver_char(maneuver_from_index(c)));
    out += buf;
  }
  out += '\n';
  for (int t = 0; t < kNumClasses; ++t) {
    char buf[96];
    const Maneuver m = maneuver_from_index(t);
    std::snprintf(buf, sizeof(buf), "%8s ", maneuver_name(m));
    out += buf;
    for (int p = 0; p < kNumClasses; ++p) {
      std::snprintf(buf, sizeof(buf), "%8lld",
                    static_cast<long long>(cm.at(m, maneuver_from_index(p))));
      out += buf;
    }
    out += '\n';
  }
  out += '\n';
  out += "class     precision   recall       f1\n";
  for (int c = 0; c < kNumClasses; ++c) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%8s %10.6f %8.6f %8.6f\n",
                  maneuver_name(maneuver_from_index(c)), report.precision[c],
                  report.recall[c], report.f1[c]);
    out += buf;
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%8s %10.6f %8.6f %8.6f\n", "macro",
                report.macro_precision, report.macro_recall, report.macro_f1);
  out += buf;
  std::snprintf(buf, sizeof(buf), "\naccuracy %.6f over %lld steps\n",
                report.accuracy, static_cast<long long>(report.scored_steps));
  out += buf;
  if (report.sequence_accuracy >= 0.0) {
    std::snprintf(buf, sizeof(buf), "sequence accuracy (majority vote) %.6f\n",
                  report.sequence_accuracy);
    out += buf;
  }
  return out;
}

std::string render_report_flat(const MetricsReport& report) {
  std::string out;
  append_kv(out, "accuracy", report.accuracy);
  append_kv(out, "macro_precision", report.macro_precision);
  append_kv(out, "macro_recall", report.macro_recall);
  append_kv(out, "macro_f1", report.macro_f1);
  for (int c = 0; c < kNumClasses; ++c) {
    const char m = maneuver_char(maneuver_from_index(c));
    char key[32];
    std::snprintf(key, sizeof(key), "precision_%c", m);
    append_kv(out, key, report.precision[c]);
    std::snprintf(key, sizeof(key), "recall_%c", m);
    append_kv(out, key, report.recall[c]);
    std::snprintf(key, sizeof(key), "f1_%c", m);
    append_kv(out, key, report.f1[c]);
  }
  if (report.sequence_accuracy >= 0.0) {
    append_kv(out, "sequence_accuracy", report.sequence_accuracy);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "scored_steps,%lld\n",
                static_cast<long long>(report.scored_steps));
  out += buf;
  return out;
}

std::string render_confusion_csv(const ConfusionMatrix& cm) {
  std::string out = "truth\\pred,S,L,R,P\n";
  for (int t = 0; t < kNumClasses; ++t) {
    const Maneuver m = maneuver_from_index(t);
    out.push_back(maneuver_char(m));
    for (int p = 0; p < kNumClasses; ++p) {
      out.push_back(',');
      out += std::to_string(cm.at(m, maneuver_from_index(p)));
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace intentml
