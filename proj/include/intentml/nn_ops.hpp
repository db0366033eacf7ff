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

#ifndef INTENTML_NN_OPS_HPP_
#define INTENTML_NN_OPS_HPP_

#include <span>

#include "intentml/rng.hpp"
#include "intentml/tensor.hpp"

namespace intentml::nn {

// Uniform in [-limit, limit] with limit = sqrt(6 / (fan_in + fan_out)).
void glorot_fill(Tensor2& t, int fan_in, int fan_out, Rng& rng);

// Numerically stable softmax (max subtraction), in place.
void softmax_inplace(std::span<double> logits);
Vec softmax(std::span<const double> logits);

// -log(max(p[true_class], 1e-12)). Throws when the class index is out of
// range or the input is not a probability vector.
double cross_entropy(std::span<const double> probabilities, int true_class);

// Plain affine layer.
struct DenseParams {
  Tensor2 W;
  Vec b;
};

DenseParams make_dense(int input_size, int output_size, Rng& rng);
DenseParams zeros_like(const DenseParams& p);

void dense_forward(const DenseParams& p, std::span<const double> x,
                   std::span<double> y);

// grad_x may be empty when the input gradient is not needed.
void dense_backward(const DenseParams& p, std::span<const double> x,
                    std::span<const double> grad_y, DenseParams& grads,
                    std::span<double> grad_x_acc);

inline void tanh_inplace(std::span<double> x) {
  for (double& v : x) v = std::tanh(v);
}

}  // namespace intentml::nn

#endif  // INTENTML_NN_OPS_HPP_
