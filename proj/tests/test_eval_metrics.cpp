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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "intentml/metrics.hpp"

using namespace intentml;

namespace {

// The reference confusion matrix used throughout: rows (truth) S, L, R, P.
ConfusionMatrix reference_matrix() {
  ConfusionMatrix cm;
  const std::int64_t rows[4][4] = {
      {218, 0, 0, 2},
      {0, 219, 0, 1},
      {0, 0, 110, 0},
      {0, 0, 0, 330},
  };
  for (int t = 0; t < 4; ++t) {
    for (int p = 0; p < 4; ++p) {
      cm.at(maneuver_from_index(t), maneuver_from_index(p)) = rows[t][p];
    }
  }
  return cm;
}

SymbolSequence dummy_sequence(const std::string& id, Maneuver m, int len = 3) {
  SymbolSequence s;
  s.id = id;
  s.symbols.assign(len, 1);
  s.labels.assign(len, m);
  return s;
}

}  // namespace

TEST_CASE("reference matrix sums") {
  const ConfusionMatrix cm = reference_matrix();
  CHECK(cm.row_sum(Maneuver::kStraight) == 220);
  CHECK(cm.row_sum(Maneuver::kLeft) == 220);
  CHECK(cm.row_sum(Maneuver::kRight) == 110);
  CHECK(cm.row_sum(Maneuver::kStop) == 330);
  CHECK(cm.total() == 880);
  CHECK(cm.diagonal() == 877);
}

TEST_CASE("accuracy on the reference matrix matches hand arithmetic") {
  const ConfusionMatrix cm = reference_matrix();
  CHECK(std::abs(accuracy(cm) - 877.0 / 880.0) < 1e-12);
  CHECK(accuracy(cm) == doctest::Approx(0.9965909).epsilon(1e-5));
}

TEST_CASE("per-class metrics on the reference matrix") {
  const ConfusionMatrix cm = reference_matrix();
  // Stop column: 2 + 1 + 0 + 330 = 333
  CHECK(std::abs(precision(cm, Maneuver::kStop) - 330.0 / 333.0) < 1e-12);
  CHECK(std::abs(recall(cm, Maneuver::kStraight) - 218.0 / 220.0) < 1e-12);
  const double p = 330.0 / 333.0, r = 1.0;
  CHECK(f1_score(cm, Maneuver::kStop) ==
        doctest::Approx(2.0 * p * r / (p + r)).epsilon(1e-12));

  const MetricsReport report = macro_metrics(cm);
  const double macro_recall_expect =
      (218.0 / 220.0 + 219.0 / 220.0 + 1.0 + 1.0) / 4.0;
  CHECK(std::abs(report.macro_recall - macro_recall_expect) < 1e-6);
  CHECK(report.macro_recall == doctest::Approx(0.9966).epsilon(1e-3));
  CHECK(report.scored_steps == 880);
}

TEST_CASE("row and column sums decompose into TP/FN and TP/FP") {
  const ConfusionMatrix cm = reference_matrix();
  for (int c = 0; c < kNumClasses; ++c) {
    const Maneuver m = maneuver_from_index(c);
    const std::int64_t tp = cm.at(m, m);
    const std::int64_t fn = cm.row_sum(m) - tp;
    const std::int64_t fp = cm.col_sum(m) - tp;
    CHECK(recall(cm, m) ==
          doctest::Approx(static_cast<double>(tp) / (tp + fn)));
    CHECK(precision(cm, m) ==
          doctest::Approx(static_cast<double>(tp) / (tp + fp)));
  }
}

TEST_CASE("metrics are invariant under a joint class permutation") {
  const ConfusionMatrix cm = reference_matrix();
  const int perm[4] = {2, 0, 3, 1};
  ConfusionMatrix permuted;
  for (int t = 0; t < 4; ++t) {
    for (int p = 0; p < 4; ++p) {
      permuted.at(maneuver_from_index(perm[t]), maneuver_from_index(perm[p])) =
          cm.at(maneuver_from_index(t), maneuver_from_index(p));
    }
  }
  const MetricsReport a = macro_metrics(cm);
  const MetricsReport b = macro_metrics(permuted);
  CHECK(a.accuracy == doctest::Approx(b.accuracy).epsilon(1e-15));
  CHECK(a.macro_precision == doctest::Approx(b.macro_precision).epsilon(1e-15));
  CHECK(a.macro_recall == doctest::Approx(b.macro_recall).epsilon(1e-15));
  CHECK(a.macro_f1 == doctest::Approx(b.macro_f1).epsilon(1e-15));
}

TEST_CASE("degenerate cases") {
  ConfusionMatrix diag;
  for (int c = 0; c < 4; ++c) {
    diag.at(maneuver_from_index(c), maneuver_from_index(c)) = 5;
  }
  CHECK(accuracy(diag) == 1.0);
  const MetricsReport r = macro_metrics(diag);
  CHECK(r.macro_precision == 1.0);
  CHECK(r.macro_recall == 1.0);
  CHECK(r.macro_f1 == 1.0);

  ConfusionMatrix off;
  off.at(Maneuver::kStraight, Maneuver::kLeft) = 7;
  off.at(Maneuver::kLeft, Maneuver::kStraight) = 7;
  CHECK(accuracy(off) == 0.0);

  // Class with an all-zero row and column resolves to 0 by convention.
  ConfusionMatrix partial;
  partial.at(Maneuver::kStraight, Maneuver::kStraight) = 10;
  CHECK(precision(partial, Maneuver::kStop) == 0.0);
  CHECK(recall(partial, Maneuver::kStop) == 0.0);
  CHECK(f1_score(partial, Maneuver::kStop) == 0.0);

  ConfusionMatrix empty;
  CHECK_THROWS_AS(accuracy(empty), std::invalid_argument);
}

TEST_CASE("confusion builds per-timestep counts and transposes on swap") {
  using L = std::vector<Maneuver>;
  const std::vector<L> truth = {
      {Maneuver::kStraight, Maneuver::kStraight, Maneuver::kLeft},
      {Maneuver::kStop},
  };
  const std::vector<L> preds = {
      {Maneuver::kStraight, Maneuver::kLeft, Maneuver::kLeft},
      {Maneuver::kRight},
  };
  const ConfusionMatrix cm = confusion(preds, truth);
  CHECK(cm.at(Maneuver::kStraight, Maneuver::kStraight) == 1);
  CHECK(cm.at(Maneuver::kStraight, Maneuver::kLeft) == 1);
  CHECK(cm.at(Maneuver::kLeft, Maneuver::kLeft) == 1);
  CHECK(cm.at(Maneuver::kStop, Maneuver::kRight) == 1);
  CHECK(cm.total() == 4);

  const ConfusionMatrix swapped = confusion(truth, preds);
  for (int t = 0; t < 4; ++t) {
    for (int p = 0; p < 4; ++p) {
      CHECK(swapped.at(maneuver_from_index(t), maneuver_from_index(p)) ==
            cm.at(maneuver_from_index(p), maneuver_from_index(t)));
    }
  }

  CHECK_THROWS_AS(confusion(preds, {truth[0]}), std::invalid_argument);
  CHECK_THROWS_AS(confusion({preds[0]}, {truth[1]}), std::invalid_argument);
}

TEST_CASE("stratified split reproduces the 70/30 class arithmetic") {
  std::vector<SymbolSequence> data;
  const struct {
    Maneuver m;
    int n;
  } classes[] = {{Maneuver::kStraight, 990},
                 {Maneuver::kStop, 770},
                 {Maneuver::kRight, 660},
                 {Maneuver::kLeft, 550}};
  int idx = 0;
  for (const auto& c : classes) {
    for (int i = 0; i < c.n; ++i) {
      data.push_back(dummy_sequence("seq" + std::to_string(idx++), c.m, 1));
    }
  }

  const auto [train, test] = split_dataset(data, 0.7, 123);
  CHECK(train.size() == 2079);
  CHECK(test.size() == 891);

  std::array<int, 4> train_counts{}, test_counts{};
  for (const auto& s : train) ++train_counts[static_cast<int>(s.labels[0])];
  for (const auto& s : test) ++test_counts[static_cast<int>(s.labels[0])];
  CHECK(train_counts[0] == 693);
  CHECK(train_counts[3] == 539);
  CHECK(train_counts[2] == 462);
  CHECK(train_counts[1] == 385);

  // Disjoint and exhaustive by id.
  std::set<std::string> seen;
  for (const auto& s : train) seen.insert(s.id);
  for (const auto& s : test) {
    CHECK(seen.count(s.id) == 0);
    seen.insert(s.id);
  }
  CHECK(seen.size() == data.size());

  // Deterministic per seed.
  const auto [train2, test2] = split_dataset(data, 0.7, 123);
  REQUIRE(train2.size() == train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    CHECK(train[i].id == train2[i].id);
  }

  const auto [train3, test3] = split_dataset(data, 0.7, 124);
  bool any_diff = train3.size() != train.size();
  for (std::size_t i = 0; !any_diff && i < train.size(); ++i) {
    any_diff = train[i].id != train3[i].id;
  }
  CHECK(any_diff);
}

TEST_CASE("split rejects undersized classes") {
  std::vector<SymbolSequence> data = {
      dummy_sequence("a", Maneuver::kStraight),
      dummy_sequence("b", Maneuver::kStraight),
      dummy_sequence("c", Maneuver::kLeft),  // a singleton class
  };
  CHECK_THROWS_AS(split_dataset(data, 0.7, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_dataset({}, 0.7, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_dataset(data, 1.0, 1), std::invalid_argument);
}

TEST_CASE("earliest stable step") {
  using M = Maneuver;
  const std::vector<M> perfect(20, M::kStop);
  CHECK(earliest_stable_step(perfect, M::kStop, 10) == 0);

  const std::vector<M> never(20, M::kLeft);
  CHECK(!earliest_stable_step(never, M::kStop, 10).has_value());

  std::vector<M> late(20, M::kLeft);
  for (int t = 5; t < 20; ++t) late[t] = M::kStop;
  CHECK(earliest_stable_step(late, M::kStop, 10) == 5);

  // A correct window shorter than k does not count.
  std::vector<M> blip(20, M::kLeft);
  for (int t = 3; t < 8; ++t) blip[t] = M::kStop;
  CHECK(!earliest_stable_step(blip, M::kStop, 10).has_value());

  CHECK_THROWS_AS(earliest_stable_step(perfect, M::kStop, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(earliest_stable_step(perfect, M::kStop, 21),
                  std::invalid_argument);
}

TEST_CASE("majority vote") {
  using M = Maneuver;
  const std::vector<M> votes = {M::kStop, M::kStop, M::kLeft, M::kStop};
  CHECK(majority_vote(votes) == M::kStop);
  CHECK_THROWS_AS(majority_vote({}), std::invalid_argument);
}

TEST_CASE("report renderers are deterministic and self-consistent") {
  const ConfusionMatrix cm = reference_matrix();
  const MetricsReport report = macro_metrics(cm);

  const std::string csv = render_confusion_csv(cm);
  CHECK(csv ==
        "truth\\pred,S,L,R,P\n"
        "S,218,0,0,2\n"
        "L,0,219,0,1\n"
        "R,0,0,110,0\n"
        "P,0,0,0,330\n");

  const std::string flat = render_report_flat(report);
  CHECK(flat.find("accuracy,0.996591\n") != std::string::npos);
  CHECK(flat.find("recall_S,0.990909\n") != std::string::npos);
  CHECK(flat.find("precision_P,0.990991\n") != std::string::npos);
  CHECK(flat.find("scored_steps,880\n") != std::string::npos);
  // Not applicable for a bare matrix, so the key must be absent.
  CHECK(flat.find("sequence_accuracy") == std::string::npos);

  const std::string text = render_report_text(report, cm);
  CHECK(text.find("accuracy 0.996591 over 880 steps") != std::string::npos);
  CHECK(render_report_text(report, cm) == text);
}
