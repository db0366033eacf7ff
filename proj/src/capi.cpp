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

#include "intentml/intent_c.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "intentml/discretizer.hpp"
#include "intentml/errors.hpp"
#include "intentml/metrics.hpp"
#include "intentml/model.hpp"
#include "intentml/trace.hpp"

static_assert(sizeof(int) == sizeof(int32_t),
              "the C API exposes symbol buffers as int32_t");

struct iml_traces {
  std::vector<intentml::ManeuverTrace> traces;
};

struct iml_symbols {
  std::vector<intentml::SymbolSequence> sequences;
};

struct iml_model {
  intentml::IntentModel model;
  explicit iml_model(intentml::IntentModel m) : model(std::move(m)) {}
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what; }

template <typename F>
iml_status wrap(F&& f) noexcept {
  try {
    return f();
  } catch (const intentml::IoError& e) {
    set_error(e.what());
    return IML_ERR_IO;
  } catch (const intentml::ParseError& e) {
    set_error(e.what());
    return IML_ERR_PARSE;
  } catch (const intentml::CorruptError& e) {
    set_error(e.what());
    return IML_ERR_CORRUPT;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return IML_ERR_INVALID_ARGUMENT;
  } catch (const std::out_of_range& e) {
    set_error(e.what());
    return IML_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return IML_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return IML_ERR_INTERNAL;
  }
}

iml_status require(bool ok, const char* what) {
  if (!ok) {
    set_error(what);
    return IML_ERR_INVALID_ARGUMENT;
  }
  return IML_OK;
}

intentml::SynthConfig to_cpp(const iml_synth_config& c) {
  intentml::SynthConfig out;
  out.count_straight = c.count_straight;
  out.count_stop = c.count_stop;
  out.count_right = c.count_right;
  out.count_left = c.count_left;
  out.length = c.length;
  out.dt = c.dt;
  out.cruise_speed = c.cruise_speed;
  out.turn_speed = c.turn_speed;
  out.turn_peak_yaw = c.turn_peak_yaw;
  out.stop_decel = c.stop_decel;
  out.turn_decel_start = c.turn_decel_start;
  out.turn_onset = c.turn_onset;
  out.turn_offset = c.turn_offset;
  out.turn_recover_end = c.turn_recover_end;
  out.stop_decel_start = c.stop_decel_start;
  out.velocity_noise_sigma = c.velocity_noise_sigma;
  out.yaw_noise_sigma = c.yaw_noise_sigma;
  out.seed = c.seed;
  return out;
}

intentml::DiscretizerConfig to_cpp(const iml_discretizer_config& c) {
  intentml::DiscretizerConfig out;
  out.velocity_threshold = c.velocity_threshold;
  out.yaw_low = c.yaw_low;
  out.yaw_high = c.yaw_high;
  return out;
}

intentml::ModelConfig to_cpp(const iml_model_config& c) {
  if (c.kind < IML_MODEL_PROPOSED || c.kind > IML_MODEL_MLP) {
    throw std::invalid_argument("model config: bad model kind");
  }
  intentml::ModelConfig out;
  out.kind = static_cast<intentml::ModelKind>(c.kind);
  out.hidden = c.hidden;
  out.attention_dim = c.attention_dim;
  out.layers = c.layers;
  out.mlp_window = c.mlp_window;
  out.mlp_hidden1 = c.mlp_hidden1;
  out.mlp_hidden2 = c.mlp_hidden2;
  out.learning_rate = c.learning_rate;
  out.batch_size = c.batch_size;
  out.max_epochs = c.max_epochs;
  out.patience = c.patience;
  out.validation_fraction = c.validation_fraction;
  out.threads = c.threads;
  out.seed = c.seed;
  return out;
}

iml_model_config to_c(const intentml::ModelConfig& c) {
  iml_model_config out{};
  out.kind = static_cast<iml_model_kind>(c.kind);
  out.hidden = c.hidden;
  out.attention_dim = c.attention_dim;
  out.layers = c.layers;
  out.mlp_window = c.mlp_window;
  out.mlp_hidden1 = c.mlp_hidden1;
  out.mlp_hidden2 = c.mlp_hidden2;
  out.learning_rate = c.learning_rate;
  out.batch_size = c.batch_size;
  out.max_epochs = c.max_epochs;
  out.patience = c.patience;
  out.validation_fraction = c.validation_fraction;
  out.threads = c.threads;
  out.seed = c.seed;
  return out;
}

intentml::ConfusionMatrix cm_from_c(const int64_t confusion[16]) {
  intentml::ConfusionMatrix cm;
  for (int i = 0; i < 16; ++i) {
    if (confusion[i] < 0) {
      throw std::invalid_argument("confusion counts must be >= 0");
    }
    cm.counts[i] = confusion[i];
  }
  return cm;
}

void report_to_c(const intentml::MetricsReport& r, iml_metrics_report* out) {
  for (int c = 0; c < intentml::kNumClasses; ++c) {
    out->precision[c] = r.precision[c];
    out->recall[c] = r.recall[c];
    out->f1[c] = r.f1[c];
  }
  out->macro_precision = r.macro_precision;
  out->macro_recall = r.macro_recall;
  out->macro_f1 = r.macro_f1;
  out->accuracy = r.accuracy;
  out->sequence_accuracy = r.sequence_accuracy;
  out->scored_steps = r.scored_steps;
}

intentml::MetricsReport report_from_c(const iml_metrics_report& r) {
  intentml::MetricsReport out;
  for (int c = 0; c < intentml::kNumClasses; ++c) {
    out.precision[c] = r.precision[c];
    out.recall[c] = r.recall[c];
    out.f1[c] = r.f1[c];
  }
  out.macro_precision = r.macro_precision;
  out.macro_recall = r.macro_recall;
  out.macro_f1 = r.macro_f1;
  out.accuracy = r.accuracy;
  out.sequence_accuracy = r.sequence_accuracy;
  out.scored_steps = r.scored_steps;
  return out;
}

iml_status copy_string(const std::string& s, char* buf, size_t capacity,
                       size_t* needed) {
  if (needed != nullptr) *needed = s.size() + 1;
  if (buf == nullptr) return IML_OK;
  if (capacity < s.size() + 1) {
    set_error("buffer too small");
    return IML_ERR_INVALID_ARGUMENT;
  }
  std::memcpy(buf, s.data(), s.size() + 1);
  return IML_OK;
}

std::vector<int> symbols_from_c(const int32_t* symbols, size_t length) {
  if (symbols == nullptr || length == 0) {
    throw std::invalid_argument("empty symbol buffer");
  }
  return std::vector<int>(symbols, symbols + length);
}

}  // namespace

extern "C" {

const char* iml_version(void) { return "1.0.0"; }

const char* iml_last_error(void) { return g_last_error.c_str(); }

void iml_synth_config_default(iml_synth_config* cfg) {
  if (cfg == nullptr) return;
  const intentml::SynthConfig d;
  cfg->count_straight = d.count_straight;
  cfg->count_stop = d.count_stop;
  cfg->count_right = d.count_right;
  cfg->count_left = d.count_left;
  cfg->length = d.length;
  cfg->dt = d.dt;
  cfg->cruise_speed = d.cruise_speed;
  cfg->turn_speed = d.turn_speed;
  cfg->turn_peak_yaw = d.turn_peak_yaw;
  cfg->stop_decel = d.stop_decel;
  cfg->turn_decel_start = d.turn_decel_start;
  cfg->turn_onset = d.turn_onset;
  cfg->turn_offset = d.turn_offset;
  cfg->turn_recover_end = d.turn_recover_end;
  cfg->stop_decel_start = d.stop_decel_start;
  cfg->velocity_noise_sigma = d.velocity_noise_sigma;
  cfg->yaw_noise_sigma = d.yaw_noise_sigma;
  cfg->seed = d.seed;
}

iml_status iml_traces_synth(const iml_synth_config* cfg, iml_traces** out) {
  if (auto s = require(cfg && out, "null argument")) return s;
  return wrap([&] {
    auto handle = std::make_unique<iml_traces>();
    handle->traces = intentml::synth_dataset(to_cpp(*cfg));
    *out = handle.release();
    return IML_OK;
  });
}

iml_status iml_traces_load_csv(const char* path, iml_traces** out) {
  if (auto s = require(path && out, "null argument")) return s;
  return wrap([&] {
    auto handle = std::make_unique<iml_traces>();
    handle->traces = intentml::load_traces_csv(path);
    *out = handle.release();
    return IML_OK;
  });
}

iml_status iml_traces_save_csv(const iml_traces* traces, const char* path) {
  if (auto s = require(traces && path, "null argument")) return s;
  return wrap([&] {
    intentml::save_traces_csv(traces->traces, path);
    return IML_OK;
  });
}

size_t iml_traces_count(const iml_traces* traces) {
  return traces == nullptr ? 0 : traces->traces.size();
}

iml_status iml_traces_get(const iml_traces* traces, size_t index,
                          const char** id, iml_maneuver* maneuver,
                          const double** velocity, const double** yaw_rate,
                          const double** acceleration, size_t* length) {
  if (auto s = require(traces != nullptr, "null argument")) return s;
  if (auto s = require(index < traces->traces.size(), "index out of range")) {
    return s;
  }
  const intentml::ManeuverTrace& t = traces->traces[index];
  if (id != nullptr) *id = t.id.c_str();
  if (maneuver != nullptr) *maneuver = static_cast<iml_maneuver>(t.maneuver);
  if (velocity != nullptr) *velocity = t.velocity.data();
  if (yaw_rate != nullptr) *yaw_rate = t.yaw_rate.data();
  if (acceleration != nullptr) *acceleration = t.acceleration.data();
  if (length != nullptr) *length = t.velocity.size();
  return IML_OK;
}

void iml_traces_free(iml_traces* traces) { delete traces; }

void iml_discretizer_config_default(iml_discretizer_config* cfg) {
  if (cfg == nullptr) return;
  const intentml::DiscretizerConfig d;
  cfg->velocity_threshold = d.velocity_threshold;
  cfg->yaw_low = d.yaw_low;
  cfg->yaw_high = d.yaw_high;
}

iml_status iml_discretize_step(const iml_discretizer_config* cfg,
                               double velocity, double yaw_rate,
                               int32_t* symbol) {
  if (auto s = require(cfg && symbol, "null argument")) return s;
  return wrap([&] {
    const intentml::DiscretizerConfig c = to_cpp(*cfg);
    c.validate();
    *symbol = intentml::symbolize(intentml::discretize_velocity(velocity, c),
                                  intentml::discretize_yaw(yaw_rate, c));
    return IML_OK;
  });
}

iml_status iml_symbols_from_traces(const iml_traces* traces,
                                   const iml_discretizer_config* cfg,
                                   iml_symbols** out) {
  if (auto s = require(traces && cfg && out, "null argument")) return s;
  return wrap([&] {
    auto handle = std::make_unique<iml_symbols>();
    handle->sequences =
        intentml::symbolize_traces(traces->traces, to_cpp(*cfg));
    *out = handle.release();
    return IML_OK;
  });
}

iml_status iml_symbols_save(const iml_symbols* symbols, const char* path) {
  if (auto s = require(symbols && path, "null argument")) return s;
  return wrap([&] {
    intentml::save_symbols_tsv(symbols->sequences, path);
    return IML_OK;
  });
}

iml_status iml_symbols_load(const char* path, iml_symbols** out) {
  if (auto s = require(path && out, "null argument")) return s;
  return wrap([&] {
    auto handle = std::make_unique<iml_symbols>();
    handle->sequences = intentml::load_symbols_tsv(path);
    *out = handle.release();
    return IML_OK;
  });
}

size_t iml_symbols_count(const iml_symbols* symbols) {
  return symbols == nullptr ? 0 : symbols->sequences.size();
}

iml_status iml_symbols_get(const iml_symbols* symbols, size_t index,
                           const char** id, const int32_t** sequence,
                           const uint8_t** labels, size_t* length) {
  if (auto s = require(symbols != nullptr, "null argument")) return s;
  if (auto s = require(index < symbols->sequences.size(),
                       "index out of range")) {
    return s;
  }
  const intentml::SymbolSequence& seq = symbols->sequences[index];
  if (id != nullptr) *id = seq.id.c_str();
  if (sequence != nullptr) {
    *sequence = reinterpret_cast<const int32_t*>(seq.symbols.data());
  }
  if (labels != nullptr) {
    *labels = reinterpret_cast<const uint8_t*>(seq.labels.data());
  }
  if (length != nullptr) *length = seq.symbols.size();
  return IML_OK;
}

iml_status iml_symbols_split(const iml_symbols* symbols, double train_fraction,
                             uint64_t seed, iml_symbols** train,
                             iml_symbols** test) {
  if (auto s = require(symbols && train && test, "null argument")) return s;
  return wrap([&] {
    auto [tr, te] =
        intentml::split_dataset(symbols->sequences, train_fraction, seed);
    auto train_handle = std::make_unique<iml_symbols>();
    auto test_handle = std::make_unique<iml_symbols>();
    train_handle->sequences = std::move(tr);
    test_handle->sequences = std::move(te);
    *train = train_handle.release();
    *test = test_handle.release();
    return IML_OK;
  });
}

void iml_symbols_free(iml_symbols* symbols) { delete symbols; }

void iml_model_config_default(iml_model_config* cfg) {
  if (cfg == nullptr) return;
  *cfg = to_c(intentml::ModelConfig{});
}

iml_status iml_model_build(const iml_model_config* cfg, iml_model** out) {
  if (auto s = require(cfg && out, "null argument")) return s;
  return wrap([&] {
    auto handle =
        std::make_unique<iml_model>(intentml::IntentModel::build(to_cpp(*cfg)));
    *out = handle.release();
    return IML_OK;
  });
}

iml_status iml_model_train(iml_model* model, const iml_symbols* train_data) {
  if (auto s = require(model && train_data, "null argument")) return s;
  return wrap([&] {
    const intentml::TrainResult r = model->model.train(train_data->sequences);
    if (r.diverged) {
      set_error(r.message.c_str());
      return IML_ERR_DIVERGED;
    }
    return IML_OK;
  });
}

iml_status iml_model_history(const iml_model* model, iml_epoch_stats* out,
                             size_t capacity, size_t* count) {
  if (auto s = require(model != nullptr, "null argument")) return s;
  const auto& history = model->model.history();
  if (count != nullptr) *count = history.size();
  if (out != nullptr) {
    const size_t n = std::min(capacity, history.size());
    for (size_t i = 0; i < n; ++i) {
      out[i].epoch = history[i].epoch;
      out[i].train_loss = history[i].train_loss;
      out[i].train_accuracy = history[i].train_accuracy;
      out[i].val_loss = history[i].val_loss;
      out[i].val_accuracy = history[i].val_accuracy;
    }
  }
  return IML_OK;
}

iml_status iml_model_config_of(const iml_model* model, iml_model_config* cfg) {
  if (auto s = require(model && cfg, "null argument")) return s;
  *cfg = to_c(model->model.config());
  return IML_OK;
}

iml_status iml_model_forward(const iml_model* model, const int32_t* symbols,
                             size_t length, double* probabilities,
                             double* attention) {
  if (auto s = require(model && probabilities, "null argument")) return s;
  return wrap([&] {
    intentml::SymbolSequence seq;
    seq.symbols = symbols_from_c(symbols, length);
    const intentml::PredictionRecord record = model->model.forward(seq);
    std::memcpy(probabilities, record.probabilities.data.data(),
                sizeof(double) * record.probabilities.size());
    if (attention != nullptr) {
      if (record.attention.size() ==
          static_cast<size_t>(length) * length) {
        std::memcpy(attention, record.attention.data.data(),
                    sizeof(double) * record.attention.size());
      } else {
        std::memset(attention, 0, sizeof(double) * length * length);
      }
    }
    return IML_OK;
  });
}

iml_status iml_model_predict_prefix(const iml_model* model,
                                    const int32_t* symbols, size_t length,
                                    double probabilities[4]) {
  if (auto s = require(model && probabilities, "null argument")) return s;
  return wrap([&] {
    const std::vector<int> prefix = symbols_from_c(symbols, length);
    const auto probs = model->model.predict_prefix(prefix);
    std::memcpy(probabilities, probs.data(), sizeof(double) * probs.size());
    return IML_OK;
  });
}

iml_status iml_model_save(const iml_model* model, const char* path) {
  if (auto s = require(model && path, "null argument")) return s;
  return wrap([&] {
    model->model.save(path);
    return IML_OK;
  });
}

iml_status iml_model_load(const char* path, iml_model** out) {
  if (auto s = require(path && out, "null argument")) return s;
  return wrap([&] {
    auto handle =
        std::make_unique<iml_model>(intentml::IntentModel::load(path));
    *out = handle.release();
    return IML_OK;
  });
}

void iml_model_free(iml_model* model) { delete model; }

iml_status iml_model_evaluate(const iml_model* model, const iml_symbols* data,
                              int64_t confusion[16],
                              iml_metrics_report* report) {
  if (auto s = require(model && data, "null argument")) return s;
  return wrap([&] {
    const auto [cm, r] = intentml::evaluate(model->model, data->sequences);
    if (confusion != nullptr) {
      for (int i = 0; i < 16; ++i) confusion[i] = cm.counts[i];
    }
    if (report != nullptr) report_to_c(r, report);
    return IML_OK;
  });
}

iml_status iml_metrics_from_confusion(const int64_t confusion[16],
                                      iml_metrics_report* report) {
  if (auto s = require(confusion && report, "null argument")) return s;
  return wrap([&] {
    intentml::MetricsReport r = intentml::macro_metrics(cm_from_c(confusion));
    r.sequence_accuracy = -1.0;
    report_to_c(r, report);
    return IML_OK;
  });
}

iml_status iml_render_report(const iml_metrics_report* report,
                             const int64_t confusion[16], char* buf,
                             size_t capacity, size_t* needed) {
  if (auto s = require(report && confusion, "null argument")) return s;
  return wrap([&] {
    const std::string text = intentml::render_report_text(
        report_from_c(*report), cm_from_c(confusion));
    return copy_string(text, buf, capacity, needed);
  });
}

iml_status iml_render_flat(const iml_metrics_report* report, char* buf,
                           size_t capacity, size_t* needed) {
  if (auto s = require(report != nullptr, "null argument")) return s;
  return wrap([&] {
    const std::string text =
        intentml::render_report_flat(report_from_c(*report));
    return copy_string(text, buf, capacity, needed);
  });
}

iml_status iml_render_confusion_csv(const int64_t confusion[16], char* buf,
                                    size_t capacity, size_t* needed) {
  if (auto s = require(confusion != nullptr, "null argument")) return s;
  return wrap([&] {
    const std::string text =
        intentml::render_confusion_csv(cm_from_c(confusion));
    return copy_string(text, buf, capacity, needed);
  });
}

iml_status iml_earliest_stable_step(const iml_model* model,
                                    const int32_t* symbols, size_t length,
                                    iml_maneuver truth, int32_t k,
                                    int32_t* step) {
  if (auto s = require(model && step, "null argument")) return s;
  if (auto s = require(truth >= IML_STRAIGHT && truth <= IML_STOP,
                       "bad maneuver")) {
    return s;
  }
  return wrap([&] {
    const std::vector<int> seq = symbols_from_c(symbols, length);
    const std::vector<intentml::Maneuver> preds =
        model->model.streaming_predictions(seq);
    const auto found = intentml::earliest_stable_step(
        preds, static_cast<intentml::Maneuver>(truth), k);
    *step = found.has_value() ? *found : -1;
    return IML_OK;
  });
}

}  // extern "C"
