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

#include "intentml/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "intentml/rng.hpp"

namespace intentml {

namespace {

using nn::Tensor2;
using nn::Vec;

// Salts for the independent RNG streams derived from the model seed.
constexpr std::uint64_t kInitSalt = 0x496E6974;      // parameter init
constexpr std::uint64_t kShuffleSalt = 0x53687566;   // per-epoch shuffling
constexpr std::uint64_t kValSplitSalt = 0x56616C53;  // validation split

constexpr double kClipNorm = 5.0;

int argmax(const double* p, int n) {
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (p[i] > p[best]) best = i;
  }
  return best;
}

Tensor2 one_hot(std::span<const int> symbols, int vocab) {
  if (symbols.empty()) {
    throw std::invalid_argument("model: empty symbol sequence");
  }
  Tensor2 x(static_cast<int>(symbols.size()), vocab);
  for (std::size_t t = 0; t < symbols.size(); ++t) {
    const int s = symbols[t];
    if (s < 1 || s > vocab) {
      throw std::invalid_argument("model: symbol " + std::to_string(s) +
                                  " out of range 1.." + std::to_string(vocab));
    }
    x.at(static_cast<int>(t), s - 1) = 1.0;
  }
  return x;
}

void append_spans(nn::SpanList& out, nn::LstmCellParams& p) {
  out.emplace_back(p.W.data);
  out.emplace_back(p.U.data);
  out.emplace_back(p.b);
}

void append_spans(nn::SpanList& out, nn::AttentionParams& p) {
  out.emplace_back(p.Wq.data);
  out.emplace_back(p.Wk.data);
  out.emplace_back(p.v);
}

void append_spans(nn::SpanList& out, nn::DenseParams& p) {
  out.emplace_back(p.W.data);
  out.emplace_back(p.b);
}

// ---------------------------------------------------------------------------
// Proposed model: bidirectional encoder stack, per-step additive attention
// with the encoder state at the same step as query, dense softmax head on
// [state; context].

struct ProposedCache {
  std::vector<Tensor2> inputs;  // per layer
  std::vector<nn::LstmRun> fwd_runs, bwd_runs;
  Tensor2 encoder;     // T x 2H
  Tensor2 proj_keys;   // T x A
  Tensor2 proj_query;  // T x A
  Tensor2 alpha;       // T x T, row t = weights for output step t
  Tensor2 z;           // T x 4H, [state; context]
  Tensor2 probs;       // T x 4
};

void proposed_forward(const ProposedParams& p, const ModelConfig& cfg,
                      std::span<const int> symbols, bool want_cache,
                      ProposedCache& c) {
  const int steps = static_cast<int>(symbols.size());
  const int h = cfg.hidden;
  const int h2 = 2 * h;

  Tensor2 x = one_hot(symbols, cfg.vocab_size);
  for (int l = 0; l < cfg.layers; ++l) {
    c.inputs.push_back(std::move(x));
    const Tensor2& in = c.inputs.back();
    nn::LstmRun fr = nn::lstm_run(in, p.fwd[l], /*reverse=*/false, want_cache);
    nn::LstmRun br = nn::lstm_run(in, p.bwd[l], /*reverse=*/true, want_cache);
    Tensor2 e(steps, h2);
    for (int t = 0; t < steps; ++t) {
      std::memcpy(e.row(t), fr.h.row(t), sizeof(double) * h);
      std::memcpy(e.row(t) + h, br.h.row(t), sizeof(double) * h);
    }
    c.fwd_runs.push_back(std::move(fr));
    c.bwd_runs.push_back(std::move(br));
    if (l + 1 < cfg.layers) {
      x = std::move(e);
    } else {
      c.encoder = std::move(e);
    }
  }

  c.proj_keys = nn::attention_project_keys(c.encoder, p.attn);
  c.proj_query = Tensor2(steps, p.attn.attn_dim);
  c.alpha = Tensor2(steps, steps);
  c.z = Tensor2(steps, 2 * h2);
  c.probs = Tensor2(steps, cfg.num_classes);

  nn::AttentionCache ac;
  for (int t = 0; t < steps; ++t) {
    std::span<const double> query(c.encoder.row(t),
                                  static_cast<std::size_t>(h2));
    nn::additive_attention(query, c.encoder, c.proj_keys, p.attn,
                           {c.z.row(t) + h2, static_cast<std::size_t>(h2)},
                           &ac);
    std::memcpy(c.proj_query.row(t), ac.proj_query.data(),
                sizeof(double) * p.attn.attn_dim);
    std::memcpy(c.alpha.row(t), ac.weights.data(), sizeof(double) * steps);
    std::memcpy(c.z.row(t), c.encoder.row(t), sizeof(double) * h2);
    nn::dense_forward(p.head, {c.z.row(t), static_cast<std::size_t>(2 * h2)},
                      {c.probs.row(t), static_cast<std::size_t>(cfg.num_classes)});
    nn::softmax_inplace(
        {c.probs.row(t), static_cast<std::size_t>(cfg.num_classes)});
  }
}

// Cross-entropy sum + full backward; loss gradients are for the SUM over
// steps (the caller rescales to a mean).
double proposed_loss_grad(const ProposedParams& p, const ModelConfig& cfg,
                          const SymbolSequence& seq, ProposedParams& g,
                          std::int64_t& correct) {
  ProposedCache c;
  proposed_forward(p, cfg, seq.symbols, /*want_cache=*/true, c);

  const int steps = seq.length();
  const int h = cfg.hidden;
  const int h2 = 2 * h;
  const int a = cfg.attention_dim;
  const int nc = cfg.num_classes;

  double loss_sum = 0.0;
  Tensor2 dz(steps, 2 * h2);
  Vec dlogits(nc);
  for (int t = 0; t < steps; ++t) {
    const double* probs = c.probs.row(t);
    const int y = static_cast<int>(seq.labels[t]);
    loss_sum += nn::cross_entropy({probs, static_cast<std::size_t>(nc)}, y);
    if (argmax(probs, nc) == y) ++correct;
    for (int k = 0; k < nc; ++k) dlogits[k] = probs[k] - (k == y ? 1.0 : 0.0);
    nn::dense_backward(p.head, {c.z.row(t), static_cast<std::size_t>(2 * h2)},
                       dlogits, g.head,
                       {dz.row(t), static_cast<std::size_t>(2 * h2)});
  }

  // Attention backward across all output steps. The per-key score gradients
  // are pooled in da_keys so the two O(T * A * 2H) products against Wk run
  // once per sequence instead of once per output step.
  Tensor2 d_enc(steps, h2);
  Tensor2 da_keys(steps, a);
  Vec dw(steps), dpq(a);
  for (int t = 0; t < steps; ++t) {
    const double* dctx = dz.row(t) + h2;
    const double* alpha_t = c.alpha.row(t);

    // state half of the head input
    nn::axpy(1.0, dz.row(t), d_enc.row(t), h2);

    double mixed = 0.0;
    for (int i = 0; i < steps; ++i) {
      dw[i] = nn::dot(dctx, c.encoder.row(i), h2);
      mixed += alpha_t[i] * dw[i];
      nn::axpy(alpha_t[i], dctx, d_enc.row(i), h2);
    }

    std::fill(dpq.begin(), dpq.end(), 0.0);
    const double* pq = c.proj_query.row(t);
    for (int i = 0; i < steps; ++i) {
      const double du = alpha_t[i] * (dw[i] - mixed);
      const double* pk = c.proj_keys.row(i);
      double* da_i = da_keys.row(i);
      for (int j = 0; j < a; ++j) {
        const double th = std::tanh(pq[j] + pk[j]);
        g.attn.v[j] += du * th;
        const double daj = du * p.attn.v[j] * (1.0 - th * th);
        dpq[j] += daj;
        da_i[j] += daj;
      }
    }
    nn::outer_acc(g.attn.Wq, dpq.data(), c.encoder.row(t));
    nn::matvec_trans_acc(p.attn.Wq, dpq.data(), d_enc.row(t));
  }
  for (int i = 0; i < steps; ++i) {
    nn::outer_acc(g.attn.Wk, da_keys.row(i), c.encoder.row(i));
    nn::matvec_trans_acc(p.attn.Wk, da_keys.row(i), d_enc.row(i));
  }

  // Encoder stack backward.
  Tensor2 upstream = std::move(d_enc);
  for (int l = cfg.layers - 1; l >= 0; --l) {
    Tensor2 dhf(steps, h), dhb(steps, h);
    for (int t = 0; t < steps; ++t) {
      std::memcpy(dhf.row(t), upstream.row(t), sizeof(double) * h);
      std::memcpy(dhb.row(t), upstream.row(t) + h, sizeof(double) * h);
    }
    Tensor2 lower;
    Tensor2* lower_ptr = nullptr;
    if (l > 0) {
      lower = Tensor2(steps, c.inputs[l].cols);
      lower_ptr = &lower;
    }
    nn::lstm_run_backward(c.inputs[l], c.fwd_runs[l], p.fwd[l],
                          /*reverse=*/false, dhf, g.fwd[l], lower_ptr);
    nn::lstm_run_backward(c.inputs[l], c.bwd_runs[l], p.bwd[l],
                          /*reverse=*/true, dhb, g.bwd[l], lower_ptr);
    if (l > 0) upstream = std::move(lower);
  }
  return loss_sum;
}

// ---------------------------------------------------------------------------
// Standard LSTM baseline: unidirectional stack, dense softmax head per step.

struct StandardCache {
  std::vector<Tensor2> inputs;
  std::vector<nn::LstmRun> runs;
  Tensor2 probs;
};

void standard_forward(const StandardLstmParams& p, const ModelConfig& cfg,
                      std::span<const int> symbols, bool want_cache,
                      StandardCache& c) {
  const int steps = static_cast<int>(symbols.size());
  Tensor2 x = one_hot(symbols, cfg.vocab_size);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    c.inputs.push_back(std::move(x));
    c.runs.push_back(nn::lstm_run(c.inputs.back(), p.layers[l],
                                  /*reverse=*/false, want_cache));
    if (l + 1 < p.layers.size()) x = c.runs.back().h;
  }
  const Tensor2& enc = c.runs.back().h;
  c.probs = Tensor2(steps, cfg.num_classes);
  for (int t = 0; t < steps; ++t) {
    nn::dense_forward(p.head, {enc.row(t), static_cast<std::size_t>(enc.cols)},
                      {c.probs.row(t), static_cast<std::size_t>(cfg.num_classes)});
    nn::softmax_inplace(
        {c.probs.row(t), static_cast<std::size_t>(cfg.num_classes)});
  }
}

double standard_loss_grad(const StandardLstmParams& p, const ModelConfig& cfg,
                          const SymbolSequence& seq, StandardLstmParams& g,
                          std::int64_t& correct) {
  StandardCache c;
  standard_forward(p, cfg, seq.symbols, /*want_cache=*/true, c);

  const int steps = seq.length();
  const int h = cfg.hidden;
  const int nc = cfg.num_classes;
  const Tensor2& enc = c.runs.back().h;

  double loss_sum = 0.0;
  Tensor2 dh(steps, h);
  Vec dlogits(nc);
  for (int t = 0; t < steps; ++t) {
    const double* probs = c.probs.row(t);
    const int y = static_cast<int>(seq.labels[t]);
    loss_sum += nn::cross_entropy({probs, static_cast<std::size_t>(nc)}, y);
    if (argmax(probs, nc) == y) ++correct;
    for (int k = 0; k < nc; ++k) dlogits[k] = probs[k] - (k == y ? 1.0 : 0.0);
    nn::dense_backward(p.head, {enc.row(t), static_cast<std::size_t>(h)},
                       dlogits, g.head,
                       {dh.row(t), static_cast<std::size_t>(h)});
  }

  Tensor2 upstream = std::move(dh);
  for (int l = static_cast<int>(p.layers.size()) - 1; l >= 0; --l) {
    Tensor2 lower;
    Tensor2* lower_ptr = nullptr;
    if (l > 0) {
      lower = Tensor2(steps, c.inputs[l].cols);
      lower_ptr = &lower;
    }
    nn::lstm_run_backward(c.inputs[l], c.runs[l], p.layers[l],
                          /*reverse=*/false, upstream, g.layers[l], lower_ptr);
    if (l > 0) upstream = std::move(lower);
  }
  return loss_sum;
}

// ---------------------------------------------------------------------------
// Windowed MLP baseline: each step sees the one-hot concatenation of the
// last mlp_window symbols (zero-padded at the start of the sequence).

void mlp_window_input(std::span<const int> symbols, int t, int window,
                      int vocab, Vec& x) {
  x.assign(static_cast<std::size_t>(window) * vocab, 0.0);
  for (int j = 0; j < window; ++j) {
    const int src = t - window + 1 + j;
    if (src < 0) continue;
    const int s = symbols[src];
    if (s < 1 || s > vocab) {
      throw std::invalid_argument("model: symbol " + std::to_string(s) +
                                  " out of range 1.." + std::to_string(vocab));
    }
    x[static_cast<std::size_t>(j) * vocab + (s - 1)] = 1.0;
  }
}

void mlp_forward(const MlpParams& p, const ModelConfig& cfg,
                 std::span<const int> symbols, Tensor2& probs) {
  const int steps = static_cast<int>(symbols.size());
  if (steps == 0) throw std::invalid_argument("model: empty symbol sequence");
  probs = Tensor2(steps, cfg.num_classes);
  Vec x, z1(cfg.mlp_hidden1), z2(cfg.mlp_hidden2);
  for (int t = 0; t < steps; ++t) {
    mlp_window_input(symbols, t, cfg.mlp_window, cfg.vocab_size, x);
    nn::dense_forward(p.l1, x, z1);
    nn::tanh_inplace(z1);
    nn::dense_forward(p.l2, z1, z2);
    nn::tanh_inplace(z2);
    nn::dense_forward(p.l3, z2,
                      {probs.row(t), static_cast<std::size_t>(cfg.num_classes)});
    nn::softmax_inplace(
        {probs.row(t), static_cast<std::size_t>(cfg.num_classes)});
  }
}

double mlp_loss_grad(const MlpParams& p, const ModelConfig& cfg,
                     const SymbolSequence& seq, MlpParams& g,
                     std::int64_t& correct) {
  const int steps = seq.length();
  const int nc = cfg.num_classes;
  double loss_sum = 0.0;
  Vec x, z1(cfg.mlp_hidden1), z2(cfg.mlp_hidden2);
  Vec dlogits(nc), dz1(cfg.mlp_hidden1), dz2(cfg.mlp_hidden2), probs(nc);
  for (int t = 0; t < steps; ++t) {
    mlp_window_input(seq.symbols, t, cfg.mlp_window, cfg.vocab_size, x);
    nn::dense_forward(p.l1, x, z1);
    nn::tanh_inplace(z1);
    nn::dense_forward(p.l2, z1, z2);
    nn::tanh_inplace(z2);
    nn::dense_forward(p.l3, z2, probs);
    nn::softmax_inplace(probs);

    const int y = static_cast<int>(seq.labels[t]);
    loss_sum += nn::cross_entropy(probs, y);
    if (argmax(probs.data(), nc) == y) ++correct;

    for (int k = 0; k < nc; ++k) dlogits[k] = probs[k] - (k == y ? 1.0 : 0.0);
    std::fill(dz2.begin(), dz2.end(), 0.0);
    nn::dense_backward(p.l3, z2, dlogits, g.l3, dz2);
    for (std::size_t i = 0; i < dz2.size(); ++i) dz2[i] *= 1.0 - z2[i] * z2[i];
    std::fill(dz1.begin(), dz1.end(), 0.0);
    nn::dense_backward(p.l2, z1, dz2, g.l2, dz1);
    for (std::size_t i = 0; i < dz1.size(); ++i) dz1[i] *= 1.0 - z1[i] * z1[i];
    nn::dense_backward(p.l1, x, dz1, g.l1, {});
  }
  return loss_sum;
}

nn::SpanList param_spans(ModelParams& params) {
  nn::SpanList out;
  std::visit(
      [&out](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ProposedParams>) {
          for (auto& layer : p.fwd) append_spans(out, layer);
          for (auto& layer : p.bwd) append_spans(out, layer);
          append_spans(out, p.attn);
          append_spans(out, p.head);
        } else if constexpr (std::is_same_v<T, StandardLstmParams>) {
          for (auto& layer : p.layers) append_spans(out, layer);
          append_spans(out, p.head);
        } else {
          append_spans(out, p.l1);
          append_spans(out, p.l2);
          append_spans(out, p.l3);
        }
      },
      params);
  return out;
}

ModelParams zeros_like(const ModelParams& params) {
  return std::visit(
      [](const auto& p) -> ModelParams {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ProposedParams>) {
          ProposedParams z;
          for (const auto& l : p.fwd) z.fwd.push_back(nn::zeros_like(l));
          for (const auto& l : p.bwd) z.bwd.push_back(nn::zeros_like(l));
          z.attn = nn::zeros_like(p.attn);
          z.head = nn::zeros_like(p.head);
          return z;
        } else if constexpr (std::is_same_v<T, StandardLstmParams>) {
          StandardLstmParams z;
          for (const auto& l : p.layers) z.layers.push_back(nn::zeros_like(l));
          z.head = nn::zeros_like(p.head);
          return z;
        } else {
          return MlpParams{nn::zeros_like(p.l1), nn::zeros_like(p.l2),
                           nn::zeros_like(p.l3)};
        }
      },
      params);
}

void zero_params(ModelParams& params) {
  for (auto span : param_spans(params)) {
    std::fill(span.begin(), span.end(), 0.0);
  }
}

void accumulate(ModelParams& into, ModelParams& from) {
  nn::SpanList a = param_spans(into);
  nn::SpanList b = param_spans(from);
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (std::size_t i = 0; i < a[s].size(); ++i) a[s][i] += b[s][i];
  }
}

void scale(ModelParams& params, double factor) {
  for (auto span : param_spans(params)) {
    for (double& x : span) x *= factor;
  }
}

}  // namespace

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kProposed: return "proposed";
    case ModelKind::kStandardLstm: return "standard-lstm";
    case ModelKind::kMlp: return "mlp";
  }
  return "?";
}

void ModelConfig::validate() const {
  if (vocab_size != kVocabSize) {
    throw std::invalid_argument("model config: vocab_size is fixed at 6");
  }
  if (num_classes != kNumClasses) {
    throw std::invalid_argument("model config: num_classes is fixed at 4");
  }
  if (hidden < 1 || attention_dim < 1 || layers < 1 || mlp_window < 1 ||
      mlp_hidden1 < 1 || mlp_hidden2 < 1 || batch_size < 1 ||
      max_epochs < 1 || patience < 0 || threads < 1) {
    throw std::invalid_argument("model config: sizes must be positive");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("model config: bad learning rate");
  }
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw std::invalid_argument(
        "model config: validation fraction must be in [0,1)");
  }
}

IntentModel IntentModel::build(const ModelConfig& config) {
  config.validate();
  Rng rng(mix_seed(config.seed, kInitSalt));

  IntentModel model;
  model.config_ = config;
  // Tensors are created in parameter_spans() order so the init stream is
  // part of the determinism contract.
  switch (config.kind) {
    case ModelKind::kProposed: {
      ProposedParams p;
      const int enc_out = 2 * config.hidden;
      for (int l = 0; l < config.layers; ++l) {
        const int in = l == 0 ? config.vocab_size : enc_out;
        p.fwd.push_back(nn::make_lstm_params(in, config.hidden, rng));
      }
      for (int l = 0; l < config.layers; ++l) {
        const int in = l == 0 ? config.vocab_size : enc_out;
        p.bwd.push_back(nn::make_lstm_params(in, config.hidden, rng));
      }
      p.attn = nn::make_attention_params(enc_out, enc_out,
                                         config.attention_dim, rng);
      p.head = nn::make_dense(2 * enc_out, config.num_classes, rng);
      model.params_ = std::move(p);
      break;
    }
    case ModelKind::kStandardLstm: {
      StandardLstmParams p;
      for (int l = 0; l < config.layers; ++l) {
        const int in = l == 0 ? config.vocab_size : config.hidden;
        p.layers.push_back(nn::make_lstm_params(in, config.hidden, rng));
      }
      p.head = nn::make_dense(config.hidden, config.num_classes, rng);
      model.params_ = std::move(p);
      break;
    }
    case ModelKind::kMlp: {
      MlpParams p;
      p.l1 = nn::make_dense(config.mlp_window * config.vocab_size,
                            config.mlp_hidden1, rng);
      p.l2 = nn::make_dense(config.mlp_hidden1, config.mlp_hidden2, rng);
      p.l3 = nn::make_dense(config.mlp_hidden2, config.num_classes, rng);
      model.params_ = std::move(p);
      break;
    }
  }
  return model;
}

nn::SpanList IntentModel::parameter_spans() { return param_spans(params_); }

std::size_t IntentModel::parameter_count() {
  return nn::total_size(parameter_spans());
}

PredictionRecord IntentModel::forward(const SymbolSequence& sequence) const {
  PredictionRecord record;
  record.id = sequence.id;
  switch (config_.kind) {
    case ModelKind::kProposed: {
      ProposedCache c;
      proposed_forward(std::get<ProposedParams>(params_), config_,
                       sequence.symbols, /*want_cache=*/false, c);
      record.probabilities = std::move(c.probs);
      record.attention = std::move(c.alpha);
      break;
    }
    case ModelKind::kStandardLstm: {
      StandardCache c;
      standard_forward(std::get<StandardLstmParams>(params_), config_,
                       sequence.symbols, /*want_cache=*/false, c);
      record.probabilities = std::move(c.probs);
      break;
    }
    case ModelKind::kMlp: {
      mlp_forward(std::get<MlpParams>(params_), config_, sequence.symbols,
                  record.probabilities);
      break;
    }
  }
  record.predicted.reserve(record.probabilities.rows);
  for (int t = 0; t < record.probabilities.rows; ++t) {
    record.predicted.push_back(maneuver_from_index(
        argmax(record.probabilities.row(t), config_.num_classes)));
  }
  return record;
}

double IntentModel::sequence_loss(const SymbolSequence& sequence) const {
  if (sequence.symbols.size() != sequence.labels.size()) {
    throw std::invalid_argument("model: symbol/label length mismatch");
  }
  const PredictionRecord record = forward(sequence);
  double loss = 0.0;
  for (int t = 0; t < record.probabilities.rows; ++t) {
    loss += nn::cross_entropy(
        {record.probabilities.row(t),
         static_cast<std::size_t>(config_.num_classes)},
        static_cast<int>(sequence.labels[t]));
  }
  return loss / record.probabilities.rows;
}

std::pair<double, std::int64_t> IntentModel::sequence_loss_grad(
    const SymbolSequence& sequence, ModelParams& grads) const {
  if (sequence.symbols.size() != sequence.labels.size()) {
    throw std::invalid_argument("model: symbol/label length mismatch");
  }
  std::int64_t correct = 0;
  double loss = 0.0;
  switch (config_.kind) {
    case ModelKind::kProposed:
      loss = proposed_loss_grad(std::get<ProposedParams>(params_), config_,
                                sequence, std::get<ProposedParams>(grads),
                                correct);
      break;
    case ModelKind::kStandardLstm:
      loss = standard_loss_grad(std::get<StandardLstmParams>(params_), config_,
                                sequence, std::get<StandardLstmParams>(grads),
                                correct);
      break;
    case ModelKind::kMlp:
      loss = mlp_loss_grad(std::get<MlpParams>(params_), config_, sequence,
                           std::get<MlpParams>(grads), correct);
      break;
  }
  return {loss, correct};
}

std::array<double, kNumClasses> IntentModel::predict_prefix(
    std::span<const int> symbols) const {
  if (symbols.empty()) {
    throw std::invalid_argument("model: empty prefix");
  }
  SymbolSequence seq;
  seq.symbols.assign(symbols.begin(), symbols.end());
  const PredictionRecord record = forward(seq);
  std::array<double, kNumClasses> out{};
  const double* last = record.probabilities.row(record.probabilities.rows - 1);
  std::copy(last, last + kNumClasses, out.begin());
  return out;
}

std::vector<Maneuver> IntentModel::streaming_predictions(
    std::span<const int> symbols) const {
  std::vector<Maneuver> out;
  out.reserve(symbols.size());
  for (std::size_t n = 1; n <= symbols.size(); ++n) {
    const auto probs = predict_prefix(symbols.subspan(0, n));
    out.push_back(
        maneuver_from_index(argmax(probs.data(), kNumClasses)));
  }
  return out;
}

TrainResult IntentModel::train(const std::vector<SymbolSequence>& data) {
  config_.validate();
  if (data.empty()) throw std::invalid_argument("train: empty dataset");
  for (const SymbolSequence& s : data) {
    if (s.symbols.empty() || s.symbols.size() != s.labels.size()) {
      throw std::invalid_argument("train: malformed sequence '" + s.id + "'");
    }
  }

  std::vector<SymbolSequence> train_set, val_set;
  if (config_.validation_fraction > 0.0) {
    std::tie(train_set, val_set) =
        split_dataset(data, 1.0 - config_.validation_fraction,
                      mix_seed(config_.seed, kValSplitSalt));
  } else {
    train_set = data;
  }

  Rng shuffle_rng(mix_seed(config_.seed, kShuffleSalt));
  nn::SpanList pspans = parameter_spans();
  nn::AdamConfig adam_cfg;
  adam_cfg.lr = config_.learning_rate;
  nn::AdamState adam(nn::total_size(pspans), adam_cfg);

  const int batch = config_.batch_size;
  std::vector<ModelParams> sample_grads;
  for (int j = 0; j < batch; ++j) sample_grads.push_back(zeros_like(params_));
  ModelParams batch_grad = zeros_like(params_);

  ModelParams best_params = params_;
  double best_val = std::numeric_limits<double>::infinity();
  int bad_epochs = 0;

  TrainResult result;
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= config_.max_epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    std::int64_t epoch_steps = 0, epoch_correct = 0;

    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t m = std::min<std::size_t>(batch, order.size() - start);
      std::vector<double> losses(m, 0.0);
      std::vector<std::int64_t> corrects(m, 0);

      auto worker = [&](std::size_t begin, std::size_t stride,
                        std::exception_ptr& error) {
        try {
          for (std::size_t j = begin; j < m; j += stride) {
            zero_params(sample_grads[j]);
            std::int64_t correct = 0;
            const SymbolSequence& seq = train_set[order[start + j]];
            switch (config_.kind) {
              case ModelKind::kProposed:
                losses[j] = proposed_loss_grad(
                    std::get<ProposedParams>(params_), config_, seq,
                    std::get<ProposedParams>(sample_grads[j]), correct);
                break;
              case ModelKind::kStandardLstm:
                losses[j] = standard_loss_grad(
                    std::get<StandardLstmParams>(params_), config_, seq,
                    std::get<StandardLstmParams>(sample_grads[j]), correct);
                break;
              case ModelKind::kMlp:
                losses[j] = mlp_loss_grad(
                    std::get<MlpParams>(params_), config_, seq,
                    std::get<MlpParams>(sample_grads[j]), correct);
                break;
            }
            corrects[j] = correct;
          }
        } catch (...) {
          error = std::current_exception();
        }
      };

      const int nthreads =
          std::min<int>(config_.threads, static_cast<int>(m));
      std::vector<std::exception_ptr> errors(std::max(nthreads, 1));
      if (nthreads <= 1) {
        worker(0, 1, errors[0]);
      } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nthreads; ++w) {
          pool.emplace_back(worker, static_cast<std::size_t>(w),
                            static_cast<std::size_t>(nthreads),
                            std::ref(errors[w]));
        }
        for (auto& th : pool) th.join();
      }
      // A non-finite state inside the forward pass signals divergence;
      // anything else is a real error and propagates.
      for (auto& error : errors) {
        if (!error) continue;
        try {
          std::rethrow_exception(error);
        } catch (const std::logic_error&) {
          throw;
        } catch (const std::exception& e) {
          result.diverged = true;
          result.message = e.what();
          result.epochs_run = epoch;
          return result;
        }
      }

      std::int64_t batch_steps = 0;
      double batch_loss = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const SymbolSequence& seq = train_set[order[start + j]];
        batch_steps += seq.length();
        batch_loss += losses[j];
        epoch_correct += corrects[j];
      }
      epoch_loss += batch_loss;
      epoch_steps += batch_steps;
      if (!std::isfinite(batch_loss)) {
        result.diverged = true;
        result.message = "non-finite training loss";
        result.epochs_run = epoch;
        return result;
      }

      // Deterministic reduction: per-sample gradients are summed in sample
      // order, so results do not depend on the thread count.
      zero_params(batch_grad);
      for (std::size_t j = 0; j < m; ++j) {
        accumulate(batch_grad, sample_grads[j]);
      }
      scale(batch_grad, 1.0 / static_cast<double>(batch_steps));

      nn::SpanList gspans = param_spans(batch_grad);
      nn::clip_global_norm(gspans, kClipNorm);
      try {
        nn::adam_step(pspans, nn::as_const(gspans), adam);
      } catch (const std::runtime_error& e) {
        result.diverged = true;
        result.message = e.what();
        result.epochs_run = epoch;
        return result;
      }
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss / static_cast<double>(epoch_steps);
    stats.train_accuracy =
        static_cast<double>(epoch_correct) / static_cast<double>(epoch_steps);
    stats.val_loss = std::numeric_limits<double>::quiet_NaN();
    stats.val_accuracy = std::numeric_limits<double>::quiet_NaN();

    if (!val_set.empty()) {
      double val_loss = 0.0;
      std::int64_t val_steps = 0, val_correct = 0;
      for (const SymbolSequence& seq : val_set) {
        const PredictionRecord record = forward(seq);
        for (int t = 0; t < record.probabilities.rows; ++t) {
          val_loss += nn::cross_entropy(
              {record.probabilities.row(t),
               static_cast<std::size_t>(config_.num_classes)},
              static_cast<int>(seq.labels[t]));
          if (record.predicted[t] == seq.labels[t]) ++val_correct;
        }
        val_steps += record.probabilities.rows;
      }
      stats.val_loss = val_loss / static_cast<double>(val_steps);
      stats.val_accuracy =
          static_cast<double>(val_correct) / static_cast<double>(val_steps);
    }
    history_.push_back(stats);
    result.epochs_run = epoch;

    if (!val_set.empty()) {
      if (stats.val_loss < best_val) {
        best_val = stats.val_loss;
        best_params = params_;
        bad_epochs = 0;
      } else if (++bad_epochs >= config_.patience) {
        break;
      }
    }
  }

  if (!val_set.empty()) params_ = best_params;
  return result;
}

std::pair<ConfusionMatrix, MetricsReport> evaluate(
    const IntentModel& model, const std::vector<SymbolSequence>& data) {
  if (data.empty()) throw std::invalid_argument("evaluate: empty dataset");
  ConfusionMatrix cm;
  std::int64_t seq_correct = 0;
  for (const SymbolSequence& seq : data) {
    if (seq.symbols.size() != seq.labels.size()) {
      throw std::invalid_argument("evaluate: malformed sequence '" + seq.id +
                                  "'");
    }
    const PredictionRecord record = model.forward(seq);
    for (int t = 0; t < record.probabilities.rows; ++t) {
      cm.add(seq.labels[t], record.predicted[t]);
    }
    if (majority_vote(record.predicted) == seq.labels.front()) ++seq_correct;
  }
  MetricsReport report = macro_metrics(cm);
  report.sequence_accuracy =
      static_cast<double>(seq_correct) / static_cast<double>(data.size());
  return {cm, report};
}

}  // namespace intentml
