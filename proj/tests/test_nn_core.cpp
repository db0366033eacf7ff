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

#include <cmath>
#include <span>
#include <vector>

#include "intentml/attention.hpp"
#include "intentml/lstm.hpp"
#include "intentml/nn_ops.hpp"
#include "intentml/optim.hpp"
#include "intentml/rng.hpp"
#include "intentml/tensor.hpp"

using namespace intentml;
using nn::Tensor2;
using nn::Vec;

namespace {

constexpr double kFdEps = 1e-5;
constexpr double kFdTol = 1e-4;

Vec random_vec(Rng& rng, int n, double scale = 1.0) {
  Vec v(n);
  for (double& x : v) x = rng.uniform(-scale, scale);
  return v;
}

Tensor2 random_tensor(Rng& rng, int r, int c, double scale = 1.0) {
  Tensor2 t(r, c);
  for (double& x : t.data) x = rng.uniform(-scale, scale);
  return t;
}

}  // namespace

TEST_CASE("lstm cell with all-zero inputs and parameters is exactly zero") {
  Rng rng(1);
  nn::LstmCellParams p = nn::make_lstm_params(3, 4, rng);
  std::fill(p.W.data.begin(), p.W.data.end(), 0.0);
  std::fill(p.U.data.begin(), p.U.data.end(), 0.0);
  std::fill(p.b.begin(), p.b.end(), 0.0);

  Vec x(3, 0.0), h_prev(4, 0.0), c_prev(4, 0.0), h(4), c(4);
  nn::LstmCellCache cache;
  nn::lstm_cell_forward(x, h_prev, c_prev, p, h, c, &cache);
  for (int i = 0; i < 4; ++i) {
    CHECK(h[i] == 0.0);  // o = 0.5 but tanh(c) = 0
    CHECK(c[i] == 0.0);  // i*g = 0.5 * 0
    CHECK(cache.o[i] == doctest::Approx(0.5));
  }
}

TEST_CASE("lstm gate activations stay in range on random inputs") {
  Rng rng(7);
  nn::LstmCellParams p = nn::make_lstm_params(5, 6, rng);
  for (int trial = 0; trial < 20; ++trial) {
    Vec x = random_vec(rng, 5, 2.0), h_prev = random_vec(rng, 6),
        c_prev = random_vec(rng, 6), h(6), c(6);
    nn::LstmCellCache cache;
    nn::lstm_cell_forward(x, h_prev, c_prev, p, h, c, &cache);
    for (int i = 0; i < 6; ++i) {
      CHECK(cache.i[i] > 0.0);
      CHECK(cache.i[i] < 1.0);
      CHECK(cache.f[i] > 0.0);
      CHECK(cache.f[i] < 1.0);
      CHECK(cache.o[i] > 0.0);
      CHECK(cache.o[i] < 1.0);
      CHECK(cache.g[i] > -1.0);
      CHECK(cache.g[i] < 1.0);
    }
  }
}

TEST_CASE("lstm cell backward matches central finite differences") {
  for (std::uint64_t seed = 40; seed < 50; ++seed) {
    CAPTURE(seed);
    Rng rng(seed);
    nn::LstmCellParams p = nn::make_lstm_params(3, 3, rng);
    Vec x = random_vec(rng, 3), h_prev = random_vec(rng, 3),
        c_prev = random_vec(rng, 3);
    const Vec coef_h = random_vec(rng, 3), coef_c = random_vec(rng, 3);

    auto loss = [&]() {
      Vec h(3), c(3);
      nn::lstm_cell_forward(x, h_prev, c_prev, p, h, c, nullptr);
      return nn::dot(coef_h.data(), h.data(), 3) +
             nn::dot(coef_c.data(), c.data(), 3);
    };

    nn::LstmCellParams grads = nn::zeros_like(p);
    Vec gx(3, 0.0), gh_prev(3, 0.0), gc_prev(3, 0.0);
    {
      Vec h(3), c(3);
      nn::LstmCellCache cache;
      nn::lstm_cell_forward(x, h_prev, c_prev, p, h, c, &cache);
      nn::lstm_cell_backward(coef_h, coef_c, cache, p, grads, gx, gh_prev,
                             gc_prev);
    }

    nn::SpanList params = {p.W.data, p.U.data, p.b, x, h_prev, c_prev};
    nn::ConstSpanList analytic = {grads.W.data, grads.U.data, grads.b,
                                  gx,           gh_prev,      gc_prev};
    CHECK(nn::grad_check(loss, params, analytic, kFdEps) < kFdTol);
  }
}

TEST_CASE("lstm cell backward with zero upstream gradients is zero") {
  Rng rng(3);
  nn::LstmCellParams p = nn::make_lstm_params(4, 5, rng);
  Vec x = random_vec(rng, 4), h_prev = random_vec(rng, 5),
      c_prev = random_vec(rng, 5), h(5), c(5);
  nn::LstmCellCache cache;
  nn::lstm_cell_forward(x, h_prev, c_prev, p, h, c, &cache);

  nn::LstmCellParams grads = nn::zeros_like(p);
  Vec zero(5, 0.0), gx(4, 0.0), gh_prev(5, 0.0), gc_prev(5, 0.0);
  nn::lstm_cell_backward(zero, zero, cache, p, grads, gx, gh_prev, gc_prev);
  for (double g : grads.W.data) CHECK(g == 0.0);
  for (double g : grads.U.data) CHECK(g == 0.0);
  for (double g : grads.b) CHECK(g == 0.0);
  for (double g : gx) CHECK(g == 0.0);
  for (double g : gh_prev) CHECK(g == 0.0);
  for (double g : gc_prev) CHECK(g == 0.0);
}

TEST_CASE("saturated forget gate blocks the cell-state gradient") {
  Rng rng(11);
  nn::LstmCellParams p = nn::make_lstm_params(3, 3, rng);
  for (int i = 3; i < 6; ++i) p.b[i] = -50.0;  // forget gate pinned shut

  Vec x = random_vec(rng, 3), h_prev = random_vec(rng, 3),
      c_prev = random_vec(rng, 3), h(3), c(3);
  nn::LstmCellCache cache;
  nn::lstm_cell_forward(x, h_prev, c_prev, p, h, c, &cache);

  nn::LstmCellParams grads = nn::zeros_like(p);
  Vec ones(3, 1.0), gx(3, 0.0), gh_prev(3, 0.0), gc_prev(3, 0.0);
  nn::lstm_cell_backward(ones, ones, cache, p, grads, gx, gh_prev, gc_prev);
  for (double g : gc_prev) CHECK(std::abs(g) < 1e-12);
}

TEST_CASE("bidirectional run on a length-1 sequence equals the two cells") {
  Rng rng(5);
  nn::LstmCellParams fwd = nn::make_lstm_params(3, 4, rng);
  nn::LstmCellParams bwd = nn::make_lstm_params(3, 4, rng);
  Tensor2 input = random_tensor(rng, 1, 3);

  const Tensor2 out = nn::bidirectional_run(input, fwd, bwd);
  REQUIRE(out.rows == 1);
  REQUIRE(out.cols == 8);

  Vec zero(4, 0.0), hf(4), cf(4), hb(4), cb(4);
  nn::lstm_cell_forward({input.row(0), 3}, zero, zero, fwd, hf, cf, nullptr);
  nn::lstm_cell_forward({input.row(0), 3}, zero, zero, bwd, hb, cb, nullptr);
  for (int i = 0; i < 4; ++i) {
    CHECK(out.at(0, i) == hf[i]);
    CHECK(out.at(0, 4 + i) == hb[i]);
  }
}

TEST_CASE("bidirectional run output length equals input length for 1..110") {
  Rng rng(6);
  nn::LstmCellParams fwd = nn::make_lstm_params(2, 3, rng);
  nn::LstmCellParams bwd = nn::make_lstm_params(2, 3, rng);
  for (int len = 1; len <= 110; ++len) {
    Tensor2 input = random_tensor(rng, len, 2);
    const Tensor2 out = nn::bidirectional_run(input, fwd, bwd);
    CHECK(out.rows == len);
    CHECK(out.cols == 6);
  }
  CHECK_THROWS_AS(nn::bidirectional_run(Tensor2(), fwd, bwd),
                  std::invalid_argument);
}

TEST_CASE("palindromic input with shared parameters mirrors the halves") {
  Rng rng(8);
  nn::LstmCellParams p = nn::make_lstm_params(2, 3, rng);
  const int len = 9;
  Tensor2 input(len, 2);
  for (int t = 0; t <= len / 2; ++t) {
    const double a = rng.uniform(-1.0, 1.0), b = rng.uniform(-1.0, 1.0);
    input.at(t, 0) = a;
    input.at(t, 1) = b;
    input.at(len - 1 - t, 0) = a;
    input.at(len - 1 - t, 1) = b;
  }
  const Tensor2 out = nn::bidirectional_run(input, p, p);
  for (int t = 0; t < len; ++t) {
    for (int i = 0; i < 3; ++i) {
      CHECK(out.at(t, i) ==
            doctest::Approx(out.at(len - 1 - t, 3 + i)).epsilon(1e-12));
    }
  }
}

TEST_CASE("attention on identical keys is uniform") {
  Rng rng(9);
  nn::AttentionParams p = nn::make_attention_params(3, 3, 4, rng);
  Tensor2 keys(5, 3);
  const Vec key = random_vec(rng, 3);
  for (int i = 0; i < 5; ++i) {
    std::copy(key.begin(), key.end(), keys.row(i));
  }
  const Vec query = random_vec(rng, 3);
  const auto [context, weights] = nn::additive_attention(query, keys, p);
  REQUIRE(weights.size() == 5);
  for (double w : weights) CHECK(w == doctest::Approx(0.2).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) {
    CHECK(context[i] == doctest::Approx(key[i]).epsilon(1e-12));
  }
}

TEST_CASE("attention on a single key returns the key with weight 1") {
  Rng rng(10);
  nn::AttentionParams p = nn::make_attention_params(2, 3, 4, rng);
  Tensor2 keys = random_tensor(rng, 1, 3);
  const Vec query = random_vec(rng, 2);
  const auto [context, weights] = nn::additive_attention(query, keys, p);
  REQUIRE(weights.size() == 1);
  CHECK(weights[0] == 1.0);
  for (int i = 0; i < 3; ++i) CHECK(context[i] == keys.at(0, i));
  CHECK_THROWS_AS(nn::additive_attention(query, Tensor2(), p),
                  std::invalid_argument);
}

TEST_CASE("attention weights form a simplex on random inputs") {
  Rng rng(12);
  nn::AttentionParams p = nn::make_attention_params(4, 4, 5, rng);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(12));
    Tensor2 keys = random_tensor(rng, n, 4, 2.0);
    const Vec query = random_vec(rng, 4, 2.0);
    const auto [context, weights] = nn::additive_attention(query, keys, p);
    double sum = 0.0;
    for (double w : weights) {
      CHECK(w >= 0.0);
      sum += w;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("attention backward matches central finite differences") {
  for (std::uint64_t seed = 60; seed < 70; ++seed) {
    CAPTURE(seed);
    Rng rng(seed);
    nn::AttentionParams p = nn::make_attention_params(3, 3, 4, rng);
    Tensor2 keys = random_tensor(rng, 4, 3);
    Vec query = random_vec(rng, 3);
    const Vec upstream = random_vec(rng, 3);

    auto loss = [&]() {
      const auto [context, weights] = nn::additive_attention(query, keys, p);
      return nn::dot(upstream.data(), context.data(), 3);
    };

    nn::AttentionParams grads = nn::zeros_like(p);
    Vec gq(3, 0.0);
    Tensor2 gkeys(4, 3);
    {
      const Tensor2 proj = nn::attention_project_keys(keys, p);
      Vec context(3);
      nn::AttentionCache cache;
      nn::additive_attention(query, keys, proj, p, context, &cache);
      nn::additive_attention_backward(query, keys, proj, p, cache, upstream,
                                      grads, gq, gkeys);
    }

    nn::SpanList params = {p.Wq.data, p.Wk.data, p.v, query, keys.data};
    nn::ConstSpanList analytic = {grads.Wq.data, grads.Wk.data, grads.v, gq,
                                  gkeys.data};
    CHECK(nn::grad_check(loss, params, analytic, kFdEps) < kFdTol);
  }
}

TEST_CASE("softmax basics") {
  Vec logits = {0.0, 0.0, 0.0, 0.0};
  nn::softmax_inplace(logits);
  for (double v : logits) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));

  Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    Vec a = random_vec(rng, 6, 10.0);
    Vec b = a;
    for (double& v : b) v += 100.0;
    const Vec pa = nn::softmax(a), pb = nn::softmax(b);
    double sum = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
      CHECK(std::abs(pa[i] - pb[i]) <= 1e-12);
      sum += pa[i];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }

  const Vec extreme = nn::softmax(Vec{1000.0, 0.0});
  CHECK(extreme[0] == doctest::Approx(1.0));
  CHECK(extreme[1] == doctest::Approx(0.0));
  CHECK(std::isfinite(extreme[0]));
}

TEST_CASE("cross entropy values and clamping") {
  const Vec uniform = {0.25, 0.25, 0.25, 0.25};
  CHECK(nn::cross_entropy(uniform, 2) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));

  const Vec certain = {0.0, 1.0, 0.0, 0.0};
  CHECK(nn::cross_entropy(certain, 1) == 0.0);

  const Vec tiny = {1e-20, 1.0 - 1e-20, 0.0, 0.0};
  CHECK(nn::cross_entropy(tiny, 0) ==
        doctest::Approx(-std::log(1e-12)).epsilon(1e-12));

  CHECK_THROWS_AS(nn::cross_entropy(uniform, 4), std::out_of_range);
  CHECK_THROWS_AS(nn::cross_entropy(uniform, -1), std::out_of_range);
}

TEST_CASE("adam zero gradient leaves parameters unchanged") {
  Vec p = {1.0, -2.0, 3.0};
  Vec g = {0.0, 0.0, 0.0};
  nn::AdamState state(3, {});
  nn::adam_step({std::span<double>(p)}, {std::span<const double>(g)}, state);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == -2.0);
  CHECK(p[2] == 3.0);
  CHECK(state.t == 1);
}

TEST_CASE("adam first step moves a scalar by about the learning rate") {
  Vec p = {0.0};
  Vec g = {0.5};
  nn::AdamConfig cfg;
  nn::AdamState state(1, cfg);
  nn::adam_step({std::span<double>(p)}, {std::span<const double>(g)}, state);
  // bias-corrected m_hat / sqrt(v_hat) = sign(g) up to eps
  CHECK(std::abs(p[0] + cfg.lr) < 1e-6 * cfg.lr);
}

TEST_CASE("adam is deterministic given identical state") {
  Rng rng(15);
  Vec p1 = random_vec(rng, 8), g = random_vec(rng, 8);
  Vec p2 = p1;
  nn::AdamState s1(8, {}), s2(8, {});
  nn::adam_step({std::span<double>(p1)}, {std::span<const double>(g)}, s1);
  nn::adam_step({std::span<double>(p2)}, {std::span<const double>(g)}, s2);
  for (int i = 0; i < 8; ++i) CHECK(p1[i] == p2[i]);
}

TEST_CASE("adam rejects non-finite gradients without touching parameters") {
  Vec p = {1.0, 2.0};
  Vec g = {0.1, std::numeric_limits<double>::quiet_NaN()};
  nn::AdamState state(2, {});
  CHECK_THROWS_AS(
      nn::adam_step({std::span<double>(p)}, {std::span<const double>(g)},
                    state),
      std::runtime_error);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 2.0);
  CHECK(state.t == 0);
}

TEST_CASE("global norm clipping") {
  Vec g = {3.0, 4.0};  // norm 5
  CHECK(nn::clip_global_norm({std::span<double>(g)}, 10.0) ==
        doctest::Approx(5.0));
  CHECK(g[0] == 3.0);

  Vec big = {30.0, 40.0};  // norm 50 -> scaled to 5
  CHECK(nn::clip_global_norm({std::span<double>(big)}, 5.0) ==
        doctest::Approx(50.0));
  CHECK(big[0] == doctest::Approx(3.0));
  CHECK(big[1] == doctest::Approx(4.0));
}

TEST_CASE("grad_check on a quadratic is essentially exact") {
  Rng rng(16);
  Vec p = random_vec(rng, 10, 2.0);
  auto loss = [&]() {
    double s = 0.0;
    for (double x : p) s += 0.5 * x * x;
    return s;
  };
  const Vec analytic = p;  // d/dx of 0.5 x^2
  CHECK(nn::grad_check(loss, {std::span<double>(p)},
                       {std::span<const double>(analytic)}, kFdEps) < 1e-9);
}

TEST_CASE("glorot fill respects its bound and is seed-deterministic") {
  Rng a(77), b(77);
  Tensor2 t1(6, 5), t2(6, 5);
  nn::glorot_fill(t1, 5, 6, a);
  nn::glorot_fill(t2, 5, 6, b);
  const double limit = std::sqrt(6.0 / 11.0);
  for (std::size_t i = 0; i < t1.data.size(); ++i) {
    CHECK(t1.data[i] == t2.data[i]);
    CHECK(std::abs(t1.data[i]) <= limit);
  }
}
