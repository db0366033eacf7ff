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

#include "intentml/lstm.hpp"

#include <cmath>
#include <stdexcept>

#include "intentml/nn_ops.hpp"

namespace intentml::nn {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_dims(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string("lstm: ") + what +
                                " size mismatch");
  }
}

}  // namespace

LstmCellParams make_lstm_params(int input_size, int hidden_size, Rng& rng) {
  if (input_size < 1 || hidden_size < 1) {
    throw std::invalid_argument("lstm: sizes must be positive");
  }
  LstmCellParams p;
  p.input_size = input_size;
  p.hidden_size = hidden_size;
  p.W = Tensor2(4 * hidden_size, input_size);
  p.U = Tensor2(4 * hidden_size, hidden_size);
  p.b.assign(4 * hidden_size, 0.0);
  glorot_fill(p.W, input_size, hidden_size, rng);
  glorot_fill(p.U, hidden_size, hidden_size, rng);
  // Forget-gate bias starts open.
  for (int i = hidden_size; i < 2 * hidden_size; ++i) p.b[i] = 1.0;
  return p;
}

LstmCellParams zeros_like(const LstmCellParams& p) {
  LstmCellParams z;
  z.input_size = p.input_size;
  z.hidden_size = p.hidden_size;
  z.W = Tensor2(p.W.rows, p.W.cols);
  z.U = Tensor2(p.U.rows, p.U.cols);
  z.b.assign(p.b.size(), 0.0);
  return z;
}

void lstm_cell_forward(std::span<const double> x,
                       std::span<const double> h_prev,
                       std::span<const double> c_prev,
                       const LstmCellParams& params, std::span<double> h_out,
                       std::span<double> c_out, LstmCellCache* cache) {
  const int h = params.hidden_size;
  check_dims(x.size(), params.input_size, "input");
  check_dims(h_prev.size(), h, "h_prev");
  check_dims(c_prev.size(), h, "c_prev");
  check_dims(h_out.size(), h, "h_out");
  check_dims(c_out.size(), h, "c_out");

  // Gate pre-activations, stacked i|f|g|o.
  Vec a(4 * h);
  matvec(params.W, x.data(), a.data());
  matvec_acc(params.U, h_prev.data(), a.data());
  for (int i = 0; i < 4 * h; ++i) a[i] += params.b[i];

  Vec gi(h), gf(h), gg(h), go(h), c(h), tanh_c(h);
  for (int i = 0; i < h; ++i) {
    gi[i] = sigmoid(a[i]);
    gf[i] = sigmoid(a[h + i]);
    gg[i] = std::tanh(a[2 * h + i]);
    go[i] = sigmoid(a[3 * h + i]);
    c[i] = gf[i] * c_prev[i] + gi[i] * gg[i];
    tanh_c[i] = std::tanh(c[i]);
    h_out[i] = go[i] * tanh_c[i];
    c_out[i] = c[i];
    if (!std::isfinite(h_out[i]) || !std::isfinite(c[i])) {
      throw std::runtime_error("lstm: non-finite state (divergence)");
    }
  }

  if (cache != nullptr) {
    cache->x.assign(x.begin(), x.end());
    cache->h_prev.assign(h_prev.begin(), h_prev.end());
    cache->c_prev.assign(c_prev.begin(), c_prev.end());
    cache->i = std::move(gi);
    cache->f = std::move(gf);
    cache->g = std::move(gg);
    cache->o = std::move(go);
    cache->c = std::move(c);
    cache->tanh_c = std::move(tanh_c);
  }
}

void lstm_cell_backward(std::span<const double> grad_h,
                        std::span<const double> grad_c,
                        const LstmCellCache& cache,
                        const LstmCellParams& params, LstmCellParams& grads,
                        std::span<double> grad_x_acc,
                        std::span<double> grad_h_prev_acc,
                        std::span<double> grad_c_prev_out) {
  const int h = params.hidden_size;
  check_dims(cache.i.size(), h, "cache");
  check_dims(grad_h.size(), h, "grad_h");
  check_dims(grad_c.size(), h, "grad_c");
  check_dims(grad_c_prev_out.size(), h, "grad_c_prev");

  // da holds gradient w.r.t. the stacked gate pre-activations.
  Vec da(4 * h);
  for (int i = 0; i < h; ++i) {
    const double dtanh = 1.0 - cache.tanh_c[i] * cache.tanh_c[i];
    const double dc = grad_c[i] + grad_h[i] * cache.o[i] * dtanh;
    const double dgi = dc * cache.g[i];
    const double dgf = dc * cache.c_prev[i];
    const double dgg = dc * cache.i[i];
    const double dgo = grad_h[i] * cache.tanh_c[i];
    da[i] = dgi * cache.i[i] * (1.0 - cache.i[i]);
    da[h + i] = dgf * cache.f[i] * (1.0 - cache.f[i]);
    da[2 * h + i] = dgg * (1.0 - cache.g[i] * cache.g[i]);
    da[3 * h + i] = dgo * cache.o[i] * (1.0 - cache.o[i]);
    grad_c_prev_out[i] = dc * cache.f[i];
  }

  outer_acc(grads.W, da.data(), cache.x.data());
  outer_acc(grads.U, da.data(), cache.h_prev.data());
  for (int i = 0; i < 4 * h; ++i) grads.b[i] += da[i];
  if (!grad_x_acc.empty()) {
    check_dims(grad_x_acc.size(), params.input_size, "grad_x");
    matvec_trans_acc(params.W, da.data(), grad_x_acc.data());
  }
  if (!grad_h_prev_acc.empty()) {
    check_dims(grad_h_prev_acc.size(), h, "grad_h_prev");
    matvec_trans_acc(params.U, da.data(), grad_h_prev_acc.data());
  }
}

LstmRun lstm_run(const Tensor2& inputs, const LstmCellParams& params,
                 bool reverse, bool want_cache) {
  const int steps = inputs.rows;
  if (steps < 1) throw std::invalid_argument("lstm: empty sequence");
  check_dims(inputs.cols, params.input_size, "input");
  const int h = params.hidden_size;

  LstmRun run;
  run.h = Tensor2(steps, h);
  if (want_cache) run.caches.resize(steps);

  Vec h_state(h, 0.0), c_state(h, 0.0), c_next(h);
  for (int k = 0; k < steps; ++k) {
    const int pos = reverse ? steps - 1 - k : k;
    std::span<const double> x(inputs.row(pos), static_cast<std::size_t>(inputs.cols));
    lstm_cell_forward(x, h_state, c_state, params,
                      {run.h.row(pos), static_cast<std::size_t>(h)}, c_next,
                      want_cache ? &run.caches[k] : nullptr);
    h_state.assign(run.h.row(pos), run.h.row(pos) + h);
    c_state = c_next;
  }
  return run;
}

void lstm_run_backward(const Tensor2& inputs, const LstmRun& run,
                       const LstmCellParams& params, bool reverse,
                       const Tensor2& grad_h_by_pos, LstmCellParams& grads,
                       Tensor2* grad_inputs_acc) {
  const int steps = inputs.rows;
  const int h = params.hidden_size;
  if (static_cast<int>(run.caches.size()) != steps) {
    throw std::invalid_argument("lstm: run has no caches for backward");
  }
  check_dims(grad_h_by_pos.rows, steps, "grad_h rows");
  check_dims(grad_h_by_pos.cols, h, "grad_h cols");

  Vec dh_carry(h, 0.0), dc_carry(h, 0.0), dh_total(h), dc_prev(h);
  for (int k = steps - 1; k >= 0; --k) {
    const int pos = reverse ? steps - 1 - k : k;
    for (int i = 0; i < h; ++i) {
      dh_total[i] = grad_h_by_pos.at(pos, i) + dh_carry[i];
    }
    std::fill(dh_carry.begin(), dh_carry.end(), 0.0);
    std::span<double> grad_x =
        grad_inputs_acc == nullptr
            ? std::span<double>{}
            : std::span<double>(grad_inputs_acc->row(pos),
                                static_cast<std::size_t>(grad_inputs_acc->cols));
    lstm_cell_backward(dh_total, dc_carry, run.caches[k], params, grads,
                       grad_x, dh_carry, dc_prev);
    dc_carry = dc_prev;
  }
}

Tensor2 bidirectional_run(const Tensor2& inputs, const LstmCellParams& fwd,
                          const LstmCellParams& bwd) {
  if (inputs.rows < 1) throw std::invalid_argument("lstm: empty sequence");
  if (fwd.hidden_size != bwd.hidden_size) {
    throw std::invalid_argument("lstm: direction hidden sizes differ");
  }
  const LstmRun f = lstm_run(inputs, fwd, /*reverse=*/false, /*want_cache=*/false);
  const LstmRun b = lstm_run(inputs, bwd, /*reverse=*/true, /*want_cache=*/false);
  const int h = fwd.hidden_size;
  Tensor2 out(inputs.rows, 2 * h);
  for (int t = 0; t < inputs.rows; ++t) {
    double* row = out.row(t);
    const double* fr = f.h.row(t);
    const double* br = b.h.row(t);
    for (int i = 0; i < h; ++i) row[i] = fr[i];
    for (int i = 0; i < h; ++i) row[h + i] = br[i];
  }
  return out;
}

}  // namespace intentml::nn
