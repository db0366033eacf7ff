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

#include "intentml/attention.hpp"

#include <cmath>
#include <stdexcept>

#include "intentml/nn_ops.hpp"

namespace intentml::nn {

AttentionParams make_attention_params(int query_dim, int key_dim,
                                      int attn_dim, Rng& rng) {
  if (query_dim < 1 || key_dim < 1 || attn_dim < 1) {
    throw std::invalid_argument("attention: sizes must be positive");
  }
  AttentionParams p;
  p.query_dim = query_dim;
  p.key_dim = key_dim;
  p.attn_dim = attn_dim;
  p.Wq = Tensor2(attn_dim, query_dim);
  p.Wk = Tensor2(attn_dim, key_dim);
  p.v.assign(attn_dim, 0.0);
  glorot_fill(p.Wq, query_dim, attn_dim, rng);
  glorot_fill(p.Wk, key_dim, attn_dim, rng);
  const double limit = std::sqrt(6.0 / (attn_dim + 1));
  for (double& x : p.v) x = rng.uniform(-limit, limit);
  return p;
}

AttentionParams zeros_like(const AttentionParams& p) {
  AttentionParams z;
  z.query_dim = p.query_dim;
  z.key_dim = p.key_dim;
  z.attn_dim = p.attn_dim;
  z.Wq = Tensor2(p.Wq.rows, p.Wq.cols);
  z.Wk = Tensor2(p.Wk.rows, p.Wk.cols);
  z.v.assign(p.v.size(), 0.0);
  return z;
}

Tensor2 attention_project_keys(const Tensor2& keys,
                               const AttentionParams& params) {
  if (keys.cols != params.key_dim) {
    throw std::invalid_argument("attention: key dimension mismatch");
  }
  Tensor2 proj(keys.rows, params.attn_dim);
  for (int i = 0; i < keys.rows; ++i) {
    matvec(params.Wk, keys.row(i), proj.row(i));
  }
  return proj;
}

void additive_attention(std::span<const double> query, const Tensor2& keys,
                        const Tensor2& proj_keys,
                        const AttentionParams& params,
                        std::span<double> context_out, AttentionCache* cache) {
  const int n = keys.rows;
  const int a = params.attn_dim;
  if (n < 1) throw std::invalid_argument("attention: empty keys");
  if (static_cast<int>(query.size()) != params.query_dim) {
    throw std::invalid_argument("attention: query dimension mismatch");
  }
  if (static_cast<int>(context_out.size()) != params.key_dim) {
    throw std::invalid_argument("attention: context dimension mismatch");
  }

  Vec proj_q(a);
  matvec(params.Wq, query.data(), proj_q.data());

  Vec scores(n);
  for (int i = 0; i < n; ++i) {
    const double* pk = proj_keys.row(i);
    double s = 0.0;
    for (int j = 0; j < a; ++j) {
      s += params.v[j] * std::tanh(proj_q[j] + pk[j]);
    }
    scores[i] = s;
  }
  softmax_inplace(scores);

  std::fill(context_out.begin(), context_out.end(), 0.0);
  for (int i = 0; i < n; ++i) {
    axpy(scores[i], keys.row(i), context_out.data(), params.key_dim);
  }

  if (cache != nullptr) {
    cache->proj_query = std::move(proj_q);
    cache->weights = std::move(scores);
  }
}

std::pair<Vec, Vec> additive_attention(std::span<const double> query,
                                       const Tensor2& keys,
                                       const AttentionParams& params) {
  const Tensor2 proj = attention_project_keys(keys, params);
  Vec context(params.key_dim);
  AttentionCache cache;
  additive_attention(query, keys, proj, params, context, &cache);
  return {std::move(context), std::move(cache.weights)};
}

void additive_attention_backward(std::span<const double> query,
                                 const Tensor2& keys, const Tensor2& proj_keys,
                                 const AttentionParams& params,
                                 const AttentionCache& cache,
                                 std::span<const double> grad_context,
                                 AttentionParams& grads,
                                 std::span<double> grad_query_acc,
                                 Tensor2& grad_keys_acc) {
  const int n = keys.rows;
  const int a = params.attn_dim;
  const int kd = params.key_dim;
  if (static_cast<int>(cache.weights.size()) != n) {
    throw std::invalid_argument("attention: stale cache");
  }

  // context = sum_i w_i k_i
  Vec dw(n);
  for (int i = 0; i < n; ++i) {
    dw[i] = dot(grad_context.data(), keys.row(i), kd);
    axpy(cache.weights[i], grad_context.data(), grad_keys_acc.row(i), kd);
  }

  // softmax backward: du_i = w_i (dw_i - sum_j w_j dw_j)
  double mixed = 0.0;
  for (int i = 0; i < n; ++i) mixed += cache.weights[i] * dw[i];

  // score_i = v . tanh(proj_q + proj_k_i)
  Vec dproj_q(a, 0.0), da(a), th(a);
  for (int i = 0; i < n; ++i) {
    const double du = cache.weights[i] * (dw[i] - mixed);
    const double* pk = proj_keys.row(i);
    for (int j = 0; j < a; ++j) {
      th[j] = std::tanh(cache.proj_query[j] + pk[j]);
      grads.v[j] += du * th[j];
      da[j] = du * params.v[j] * (1.0 - th[j] * th[j]);
      dproj_q[j] += da[j];
    }
    outer_acc(grads.Wk, da.data(), keys.row(i));
    matvec_trans_acc(params.Wk, da.data(), grad_keys_acc.row(i));
  }

  outer_acc(grads.Wq, dproj_q.data(), query.data());
  if (!grad_query_acc.empty()) {
    matvec_trans_acc(params.Wq, dproj_q.data(), grad_query_acc.data());
  }
}

}  // namespace intentml::nn
