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

#include "intentml/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace intentml::nn {

std::size_t total_size(const ConstSpanList& spans) {
  std::size_t n = 0;
  for (const auto& s : spans) n += s.size();
  return n;
}

std::size_t total_size(const SpanList& spans) {
  std::size_t n = 0;
  for (const auto& s : spans) n += s.size();
  return n;
}

ConstSpanList as_const(const SpanList& spans) {
  ConstSpanList out;
  out.reserve(spans.size());
  for (const auto& s : spans) out.emplace_back(s.data(), s.size());
  return out;
}

void adam_step(const SpanList& params, const ConstSpanList& grads,
               AdamState& state) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("adam: span list size mismatch");
  }
  if (total_size(params) != state.m.size()) {
    throw std::invalid_argument("adam: state size mismatch");
  }
  for (std::size_t s = 0; s < params.size(); ++s) {
    if (params[s].size() != grads[s].size()) {
      throw std::invalid_argument("adam: span size mismatch");
    }
    for (double g : grads[s]) {
      if (!std::isfinite(g)) {
        throw std::runtime_error("adam: non-finite gradient, step aborted");
      }
    }
  }

  const AdamConfig& c = state.cfg;
  const std::int64_t t = state.t + 1;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(t));

  std::size_t offset = 0;
  for (std::size_t s = 0; s < params.size(); ++s) {
    std::span<double> p = params[s];
    std::span<const double> g = grads[s];
    for (std::size_t i = 0; i < p.size(); ++i) {
      double& m = state.m[offset + i];
      double& v = state.v[offset + i];
      m = c.beta1 * m + (1.0 - c.beta1) * g[i];
      v = c.beta2 * v + (1.0 - c.beta2) * g[i] * g[i];
      const double m_hat = m / bc1;
      const double v_hat = v / bc2;
      p[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
    }
    offset += p.size();
  }
  state.t = t;
}

double clip_global_norm(const SpanList& grads, double max_norm) {
  double sq = 0.0;
  for (const auto& g : grads) {
    for (double x : g) sq += x * x;
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (const auto& g : grads) {
      for (double& x : g) x *= scale;
    }
  }
  return norm;
}

double grad_check(const std::function<double()>& loss, const SpanList& params,
                  const ConstSpanList& analytic, double eps) {
  if (params.size() != analytic.size()) {
    throw std::invalid_argument("grad_check: span list size mismatch");
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < params.size(); ++s) {
    std::span<double> p = params[s];
    std::span<const double> a = analytic[s];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double saved = p[i];
      p[i] = saved + eps;
      const double up = loss();
      p[i] = saved - eps;
      const double down = loss();
      p[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double denom =
          std::max({std::abs(a[i]), std::abs(numeric), 1e-8});
      worst = std::max(worst, std::abs(a[i] - numeric) / denom);
    }
  }
  return worst;
}

}  // namespace intentml::nn
