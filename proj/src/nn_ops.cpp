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

#include "intentml/nn_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace intentml::nn {

void glorot_fill(Tensor2& t, int fan_in, int fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& x : t.data) x = rng.uniform(-limit, limit);
}

void softmax_inplace(std::span<double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty input");
  double max = logits[0];
  for (double v : logits) max = std::max(max, v);
  double sum = 0.0;
  for (double& v : logits) {
    v = std::exp(v - max);
    sum += v;
  }
  for (double& v : logits) v /= sum;
}

Vec softmax(std::span<const double> logits) {
  Vec out(logits.begin(), logits.end());
  softmax_inplace(out);
  return out;
}

double cross_entropy(std::span<const double> probabilities, int true_class) {
  if (true_class < 0 ||
      true_class >= static_cast<int>(probabilities.size())) {
    throw std::out_of_range("cross_entropy: class index out of range");
  }
  constexpr double kFloor = 1e-12;
  return -std::log(std::max(probabilities[true_class], kFloor));
}

DenseParams make_dense(int input_size, int output_size, Rng& rng) {
  if (input_size < 1 || output_size < 1) {
    throw std::invalid_argument("dense: sizes must be positive");
  }
  DenseParams p;
  p.W = Tensor2(output_size, input_size);
  p.b.assign(output_size, 0.0);
  glorot_fill(p.W, input_size, output_size, rng);
  return p;
}

DenseParams zeros_like(const DenseParams& p) {
  DenseParams z;
  z.W = Tensor2(p.W.rows, p.W.cols);
  z.b.assign(p.b.size(), 0.0);
  return z;
}

void dense_forward(const DenseParams& p, std::span<const double> x,
                   std::span<double> y) {
  if (static_cast<int>(x.size()) != p.W.cols ||
      static_cast<int>(y.size()) != p.W.rows) {
    throw std::invalid_argument("dense: dimension mismatch");
  }
  matvec(p.W, x.data(), y.data());
  for (int i = 0; i < p.W.rows; ++i) y[i] += p.b[i];
}

void dense_backward(const DenseParams& p, std::span<const double> x,
                    std::span<const double> grad_y, DenseParams& grads,
                    std::span<double> grad_x_acc) {
  outer_acc(grads.W, grad_y.data(), x.data());
  for (int i = 0; i < p.W.rows; ++i) grads.b[i] += grad_y[i];
  if (!grad_x_acc.empty()) {
    matvec_trans_acc(p.W, grad_y.data(), grad_x_acc.data());
  }
}

}  // namespace intentml::nn
