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

#ifndef INTENTML_OPTIM_HPP_
#define INTENTML_OPTIM_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "intentml/tensor.hpp"

namespace intentml::nn {

// Parameters and gradients move through the optimizer as ordered span lists;
// the order is fixed by the owning model and must match between the two.
using SpanList = std::vector<std::span<double>>;
using ConstSpanList = std::vector<std::span<const double>>;

std::size_t total_size(const ConstSpanList& spans);
std::size_t total_size(const SpanList& spans);
ConstSpanList as_const(const SpanList& spans);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig cfg;
  std::int64_t t = 0;  // completed steps
  Vec m;               // first moments, flat over the span list
  Vec v;               // second moments

  AdamState(std::size_t n, const AdamConfig& c)
      : cfg(c), m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected Adam update. Throws std::runtime_error on non-finite
// gradients without touching params or state.
void adam_step(const SpanList& params, const ConstSpanList& grads,
               AdamState& state);

// Scales all gradients by max_norm / norm when the global L2 norm exceeds
// max_norm. Returns the pre-clip norm.
double clip_global_norm(const SpanList& grads, double max_norm);

// Central-difference check: loss() is evaluated with each coordinate nudged
// by +/- eps and the numeric slope is compared against analytic. Returns
// max |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
double grad_check(const std::function<double()>& loss, const SpanList& params,
                  const ConstSpanList& analytic, double eps);

}  // namespace intentml::nn

#endif  // INTENTML_OPTIM_HPP_
