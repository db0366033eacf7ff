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

#ifndef INTENTML_LSTM_HPP_
#define INTENTML_LSTM_HPP_

#include <span>
#include <vector>

#include "intentml/rng.hpp"
#include "intentml/tensor.hpp"

namespace intentml::nn {

// One LSTM cell. Gate rows are stacked in the fixed order i, f, g, o, so
// W is (4H x I), U is (4H x H) and b has 4H entries.
struct LstmCellParams {
  int input_size = 0;
  int hidden_size = 0;
  Tensor2 W;
  Tensor2 U;
  Vec b;
};

// Glorot-uniform W and U (per-gate fans), zero biases except the forget-gate
// slice, which starts at 1.0.
LstmCellParams make_lstm_params(int input_size, int hidden_size, Rng& rng);

LstmCellParams zeros_like(const LstmCellParams& p);

// Everything the backward pass needs about one forward step.
struct LstmCellCache {
  Vec x, h_prev, c_prev;
  Vec i, f, g, o, c, tanh_c;
};

// h = o * tanh(c), c = f * c_prev + i * g with i,f,o = sigmoid(.) and
// g = tanh(.) of the gate pre-activations W x + U h_prev + b.
// Throws on dimension mismatch or non-finite output (divergence signal).
// cache may be null when no backward pass will follow.
void lstm_cell_forward(std::span<const double> x,
                       std::span<const double> h_prev,
                       std::span<const double> c_prev,
                       const LstmCellParams& params, std::span<double> h_out,
                       std::span<double> c_out, LstmCellCache* cache);

// Analytic gradients of the forward map. grad_h/grad_c are upstream
// gradients w.r.t. h and c; parameter gradients accumulate into grads and
// input gradients accumulate into grad_x/grad_h_prev. grad_c_prev is
// overwritten.
void lstm_cell_backward(std::span<const double> grad_h,
                        std::span<const double> grad_c,
                        const LstmCellCache& cache,
                        const LstmCellParams& params, LstmCellParams& grads,
                        std::span<double> grad_x_acc,
                        std::span<double> grad_h_prev_acc,
                        std::span<double> grad_c_prev_out);

// A whole-sequence pass in one direction. h holds the hidden state at each
// input position (position-aligned regardless of direction); caches are in
// processing order and empty unless requested.
struct LstmRun {
  Tensor2 h;
  std::vector<LstmCellCache> caches;
};

LstmRun lstm_run(const Tensor2& inputs, const LstmCellParams& params,
                 bool reverse, bool want_cache);

// Backward through time for one direction. grad_h_by_pos is the upstream
// gradient at each input position; parameter gradients accumulate into
// grads, input gradients into grad_inputs_acc (may be null).
void lstm_run_backward(const Tensor2& inputs, const LstmRun& run,
                       const LstmCellParams& params, bool reverse,
                       const Tensor2& grad_h_by_pos, LstmCellParams& grads,
                       Tensor2* grad_inputs_acc);

// output row t = concat(h_fwd[t], h_bwd[t]); initial states are zero and the
// backward half runs over the reversed sequence. Throws on an empty input.
Tensor2 bidirectional_run(const Tensor2& inputs, const LstmCellParams& fwd,
                          const LstmCellParams& bwd);

}  // namespace intentml::nn

#endif  // INTENTML_LSTM_HPP_
