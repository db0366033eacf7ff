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

#ifndef INTENTML_MODEL_HPP_
#define INTENTML_MODEL_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "intentml/attention.hpp"
#include "intentml/discretizer.hpp"
#include "intentml/lstm.hpp"
#include "intentml/metrics.hpp"
#include "intentml/nn_ops.hpp"
#include "intentml/optim.hpp"
#include "intentml/tensor.hpp"

namespace intentml {

enum class ModelKind : std::uint8_t {
  kProposed = 0,      // bidirectional LSTM encoder + per-step additive attention
  kStandardLstm = 1,  // unidirectional encoder, no attention
  kMlp = 2,           // per-step feedforward over a sliding symbol window
};

const char* model_kind_name(ModelKind kind);

struct ModelConfig {
  ModelKind kind = ModelKind::kProposed;
  int vocab_size = kVocabSize;   // fixed at 6
  int num_classes = kNumClasses; // fixed at 4
  int hidden = 64;               // per direction
  int attention_dim = 32;
  int layers = 1;                // stacked recurrent layers
  int mlp_window = 5;            // symbols visible to the MLP at each step
  int mlp_hidden1 = 64;
  int mlp_hidden2 = 32;
  double learning_rate = 1e-3;
  int batch_size = 32;
  int max_epochs = 60;
  int patience = 10;              // early-stop epochs without val improvement
  double validation_fraction = 0.15;  // of the training split
  int threads = 1;
  std::uint64_t seed = 1;

  void validate() const;
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

// Per-step class probabilities and (for the proposed model) the attention
// matrix; attention row t is the weight the step-t output put on each
// encoder state.
struct PredictionRecord {
  std::string id;
  nn::Tensor2 probabilities;        // T x 4, rows sum to 1
  std::vector<Maneuver> predicted;  // per-step argmax
  nn::Tensor2 attention;            // T x T for kProposed, empty otherwise
};

struct ProposedParams {
  std::vector<nn::LstmCellParams> fwd;  // one per layer
  std::vector<nn::LstmCellParams> bwd;
  nn::AttentionParams attn;
  nn::DenseParams head;
};

struct StandardLstmParams {
  std::vector<nn::LstmCellParams> layers;
  nn::DenseParams head;
};

struct MlpParams {
  nn::DenseParams l1, l2, l3;
};

using ModelParams = std::variant<ProposedParams, StandardLstmParams, MlpParams>;

struct TrainResult {
  bool diverged = false;
  std::string message;
  int epochs_run = 0;
};

class IntentModel {
 public:
  // Fresh model with seeded initialization; deterministic per (config, seed).
  static IntentModel build(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  ModelParams& params() { return params_; }
  const ModelParams& params() const { return params_; }
  const std::vector<EpochStats>& history() const { return history_; }

  // Parameter tensors in the fixed serialization/optimizer order.
  nn::SpanList parameter_spans();
  std::size_t parameter_count();

  // Full forward pass; output always has one probability row per input step.
  PredictionRecord forward(const SymbolSequence& sequence) const;

  // Mean per-step cross-entropy of one sequence against its labels.
  double sequence_loss(const SymbolSequence& sequence) const;

  // Sum (not mean) of per-step cross-entropies, with gradients of that sum
  // accumulated into grads. Returns {loss_sum, correct_steps}.
  std::pair<double, std::int64_t> sequence_loss_grad(
      const SymbolSequence& sequence, ModelParams& grads) const;

  // Runs the prefix as if it were a full sequence and returns the final
  // step's probability row.
  std::array<double, kNumClasses> predict_prefix(
      std::span<const int> symbols) const;

  // Argmax prediction at each step when only the prefix up to that step has
  // been observed (streaming mode).
  std::vector<Maneuver> streaming_predictions(
      std::span<const int> symbols) const;

  // Adam on mean per-step cross-entropy with per-epoch seeded shuffling,
  // gradient clipping at global norm 5, and early stopping on validation
  // loss; the best-validation parameters are kept. A non-finite loss or
  // gradient aborts training with the last finite parameters in place and
  // diverged set in the result.
  TrainResult train(const std::vector<SymbolSequence>& data);

  // Versioned little-endian binary container with a CRC-32 trailer; reload
  // reproduces bit-identical predictions.
  void save(const std::string& path) const;
  static IntentModel load(const std::string& path);

 private:
  IntentModel() = default;

  ModelConfig config_;
  ModelParams params_;
  std::vector<EpochStats> history_;
};

// Per-timestep confusion plus metrics for a dataset; sequence_accuracy in
// the report is the majority-vote-per-sequence accuracy.
std::pair<ConfusionMatrix, MetricsReport> evaluate(
    const IntentModel& model, const std::vector<SymbolSequence>& data);

}  // namespace intentml

#endif  // INTENTML_MODEL_HPP_
