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

#ifndef INTENTML_ATTENTION_HPP_
#define INTENTML_ATTENTION_HPP_

#include <span>
#include <utility>

#include "intentml/rng.hpp"
#include "intentml/tensor.hpp"

namespace intentml::nn {

// Additive attention: score_i = v . tanh(Wq q + Wk k_i), weights = softmax
// over scores, context = sum_i weights_i k_i. Keys double as values.
struct AttentionParams {
  int query_dim = 0;
  int key_dim = 0;
  int attn_dim = 0;
  Tensor2 Wq;  // attn_dim x query_dim
  Tensor2 Wk;  // attn_dim x key_dim
  Vec v;       // attn_dim
};

AttentionParams make_attention_params(int query_dim, int key_dim,
                                      int attn_dim, Rng& rng);

AttentionParams zeros_like(const AttentionParams& p);

// Wk k_i for every key row; shared across queries against the same key set.
Tensor2 attention_project_keys(const Tensor2& keys,
                               const AttentionParams& params);

struct AttentionCache {
  Vec proj_query;  // Wq q
  Vec weights;     // softmax scores, one per key
};

// context_out gets key_dim entries. cache may be null for inference-only use.
void additive_attention(std::span<const double> query, const Tensor2& keys,
                        const Tensor2& proj_keys,
                        const AttentionParams& params,
                        std::span<double> context_out, AttentionCache* cache);

// Convenience form matching the definition above; computes the key
// projections itself. Throws on empty keys or dimension mismatch.
std::pair<Vec, Vec> additive_attention(std::span<const double> query,
                                       const Tensor2& keys,
                                       const AttentionParams& params);

// Gradients for one query. Parameter gradients accumulate into grads, key
// gradients into grad_keys_acc (covers both the score path and the
// context-sum path), query gradients into grad_query_acc.
void additive_attention_backward(std::span<const double> query,
                                 const Tensor2& keys, const Tensor2& proj_keys,
                                 const AttentionParams& params,
                                 const AttentionCache& cache,
                                 std::span<const double> grad_context,
                                 AttentionParams& grads,
                                 std::span<double> grad_query_acc,
                                 Tensor2& grad_keys_acc);

}  // namespace intentml::nn

#endif  // INTENTML_ATTENTION_HPP_
