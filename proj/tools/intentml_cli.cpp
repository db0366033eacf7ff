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
//
// Command-line front end. Everything below talks to the library through the
// C API in intentml/intent_c.h only.

#include <CLI11.hpp>

#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "intentml/intent_c.h"

namespace {

constexpr char kLabelChars[4] = {'S', 'L', 'R', 'P'};

[[noreturn]] void die(iml_status status, const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  std::exit(status == IML_OK ? 1 : static_cast<int>(status));
}

void check(iml_status status) {
  if (status != IML_OK) die(status, iml_last_error());
}

struct TracesDeleter {
  void operator()(iml_traces* t) const { iml_traces_free(t); }
};
struct SymbolsDeleter {
  void operator()(iml_symbols* s) const { iml_symbols_free(s); }
};
struct ModelDeleter {
  void operator()(iml_model* m) const { iml_model_free(m); }
};
using TracesPtr = std::unique_ptr<iml_traces, TracesDeleter>;
using SymbolsPtr = std::unique_ptr<iml_symbols, SymbolsDeleter>;
using ModelPtr = std::unique_ptr<iml_model, ModelDeleter>;

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die(IML_ERR_IO, "cannot open '" + path + "' for writing");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) die(IML_ERR_IO, "write failed for '" + path + "'");
}

std::string rendered(iml_status (*render)(const iml_metrics_report*,
                                          char*, size_t, size_t*),
                     const iml_metrics_report& report) {
  size_t needed = 0;
  check(render(&report, nullptr, 0, &needed));
  std::string out(needed, '\0');
  check(render(&report, out.data(), out.size(), &needed));
  out.resize(needed - 1);  // drop the NUL
  return out;
}

std::string rendered_report(const iml_metrics_report& report,
                            const int64_t confusion[16]) {
  size_t needed = 0;
  check(iml_render_report(&report, confusion, nullptr, 0, &needed));
  std::string out(needed, '\0');
  check(iml_render_report(&report, confusion, out.data(), out.size(),
                          &needed));
  out.resize(needed - 1);
  return out;
}

std::string rendered_confusion(const int64_t confusion[16]) {
  size_t needed = 0;
  check(iml_render_confusion_csv(confusion, nullptr, 0, &needed));
  std::string out(needed, '\0');
  check(iml_render_confusion_csv(confusion, out.data(), out.size(), &needed));
  out.resize(needed - 1);
  return out;
}

// Symbol files are tab-separated; anything else is treated as a trace CSV.
bool looks_like_symbol_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line)) return false;
  return line.find('\t') != std::string::npos;
}

SymbolsPtr load_any_as_symbols(const std::string& path,
                               const iml_discretizer_config& dcfg) {
  iml_symbols* symbols = nullptr;
  if (looks_like_symbol_file(path)) {
    check(iml_symbols_load(path.c_str(), &symbols));
  } else {
    iml_traces* traces = nullptr;
    check(iml_traces_load_csv(path.c_str(), &traces));
    TracesPtr traces_owner(traces);
    check(iml_symbols_from_traces(traces, &dcfg, &symbols));
  }
  return SymbolsPtr(symbols);
}

std::string history_csv(const iml_model* model) {
  size_t count = 0;
  check(iml_model_history(model, nullptr, 0, &count));
  std::vector<iml_epoch_stats> stats(count);
  check(iml_model_history(model, stats.data(), stats.size(), &count));
  std::string out = "epoch,train_loss,train_accuracy,val_loss,val_accuracy\n";
  char buf[160];
  for (const iml_epoch_stats& e : stats) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.6f\n", e.epoch,
                  e.train_loss, e.train_accuracy, e.val_loss, e.val_accuracy);
    out += buf;
  }
  return out;
}

double strict_stod(const std::string& s) {
  std::size_t idx = 0;
  const double v = std::stod(s, &idx);
  if (idx != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

int argmax4(const double* p) {
  int best = 0;
  for (int c = 1; c < 4; ++c) {
    if (p[c] > p[best]) best = c;
  }
  return best;
}

// Options shared by the training-style subcommands.
struct ModelFlags {
  std::string kind = "proposed";
  iml_model_config cfg{};

  void attach(CLI::App* cmd) {
    iml_model_config_default(&cfg);
    cmd->add_option("--model", kind, "Model to train")
        ->check(CLI::IsMember({"proposed", "standard-lstm", "mlp"}))
        ->envname("INTENTML_MODEL");
    cmd->add_option("--epochs", cfg.max_epochs, "Maximum training epochs")
        ->envname("INTENTML_EPOCHS");
    cmd->add_option("--hidden", cfg.hidden, "Recurrent units per direction")
        ->envname("INTENTML_HIDDEN");
    cmd->add_option("--attention-dim", cfg.attention_dim,
                    "Attention projection width")
        ->envname("INTENTML_ATTENTION_DIM");
    cmd->add_option("--layers", cfg.layers, "Stacked recurrent layers")
        ->envname("INTENTML_LAYERS");
    cmd->add_option("--window", cfg.mlp_window, "MLP symbol window")
        ->envname("INTENTML_WINDOW");
    cmd->add_option("--batch", cfg.batch_size, "Batch size")
        ->envname("INTENTML_BATCH");
    cmd->add_option("--lr", cfg.learning_rate, "Adam learning rate")
        ->envname("INTENTML_LR");
    cmd->add_option("--patience", cfg.patience,
                    "Early-stop patience (epochs)")
        ->envname("INTENTML_PATIENCE");
    cmd->add_option("--val-fraction", cfg.validation_fraction,
                    "Validation fraction of the training split")
        ->envname("INTENTML_VAL_FRACTION");
    cmd->add_option("--threads", cfg.threads, "Worker threads per batch")
        ->envname("INTENTML_THREADS");
  }

  iml_model_config resolved(uint64_t seed) const {
    iml_model_config out = cfg;
    out.kind = kind == "standard-lstm" ? IML_MODEL_STANDARD_LSTM
               : kind == "mlp"         ? IML_MODEL_MLP
                                       : IML_MODEL_PROPOSED;
    out.seed = seed;
    return out;
  }
};

struct DiscretizerFlags {
  iml_discretizer_config cfg{};
  double yaw_threshold = 3.0;

  void attach(CLI::App* cmd) {
    iml_discretizer_config_default(&cfg);
    cmd->add_option("--velocity-threshold", cfg.velocity_threshold,
                    "Velocity class boundary (m/s)")
        ->envname("INTENTML_VELOCITY_THRESHOLD");
    cmd->add_option("--yaw-threshold", yaw_threshold,
                    "Yaw-rate band half-width (rad/s)")
        ->envname("INTENTML_YAW_THRESHOLD");
  }

  iml_discretizer_config resolved() const {
    iml_discretizer_config out = cfg;
    out.yaw_low = -yaw_threshold;
    out.yaw_high = yaw_threshold;
    return out;
  }
};

struct EvalOutputs {
  iml_metrics_report report{};
  std::array<int64_t, 16> confusion{};
};

EvalOutputs evaluate_model(const iml_model* model, const iml_symbols* data) {
  EvalOutputs out;
  check(iml_model_evaluate(model, data, out.confusion.data(), &out.report));
  return out;
}

void write_report_files(const std::string& dir, const EvalOutputs& eval) {
  write_file(dir + "/report.txt",
             rendered_report(eval.report, eval.confusion.data()));
  write_file(dir + "/metrics.kv", rendered(iml_render_flat, eval.report));
  write_file(dir + "/confusion.csv", rendered_confusion(eval.confusion.data()));
}

// ---------------------------------------------------------------------- //

int cmd_synth(const iml_synth_config& cfg, const std::string& out_path) {
  iml_traces* traces = nullptr;
  check(iml_traces_synth(&cfg, &traces));
  TracesPtr owner(traces);
  check(iml_traces_save_csv(traces, out_path.c_str()));
  std::printf("S:%lld P:%lld R:%lld L:%lld\n",
              static_cast<long long>(cfg.count_straight),
              static_cast<long long>(cfg.count_stop),
              static_cast<long long>(cfg.count_right),
              static_cast<long long>(cfg.count_left));
  return 0;
}

int cmd_discretize(const std::string& data, const std::string& out,
                   const DiscretizerFlags& dflags) {
  iml_traces* traces = nullptr;
  check(iml_traces_load_csv(data.c_str(), &traces));
  TracesPtr traces_owner(traces);
  const iml_discretizer_config dcfg = dflags.resolved();
  iml_symbols* symbols = nullptr;
  check(iml_symbols_from_traces(traces, &dcfg, &symbols));
  SymbolsPtr symbols_owner(symbols);
  check(iml_symbols_save(symbols, out.c_str()));
  std::printf("sequences:%zu\n", iml_symbols_count(symbols));
  return 0;
}

int cmd_train(const std::string& data, const std::string& out_dir,
              uint64_t seed, double train_fraction, const ModelFlags& mflags,
              const DiscretizerFlags& dflags) {
  std::filesystem::create_directories(out_dir);
  SymbolsPtr symbols = load_any_as_symbols(data, dflags.resolved());

  iml_symbols *train_raw = nullptr, *test_raw = nullptr;
  check(iml_symbols_split(symbols.get(), train_fraction, seed, &train_raw,
                          &test_raw));
  SymbolsPtr train(train_raw), test(test_raw);

  const iml_model_config mcfg = mflags.resolved(seed);
  iml_model* model_raw = nullptr;
  check(iml_model_build(&mcfg, &model_raw));
  ModelPtr model(model_raw);

  const iml_status train_status = iml_model_train(model.get(), train.get());
  const std::string train_error =
      train_status == IML_OK ? "" : iml_last_error();
  if (train_status != IML_OK && train_status != IML_ERR_DIVERGED) {
    die(train_status, train_error);
  }

  check(iml_model_save(model.get(), (out_dir + "/checkpoint.iml").c_str()));
  write_file(out_dir + "/history.csv", history_csv(model.get()));

  const EvalOutputs eval = evaluate_model(model.get(), test.get());
  write_report_files(out_dir, eval);

  std::printf("train_sequences:%zu test_sequences:%zu\n",
              iml_symbols_count(train.get()), iml_symbols_count(test.get()));
  std::printf("accuracy=%.6f\n", eval.report.accuracy);
  if (train_status == IML_ERR_DIVERGED) {
    die(train_status, "training diverged: " + train_error);
  }
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& data,
             const std::string& out_dir, const std::string& split,
             uint64_t split_seed, double train_fraction, bool timing,
             const DiscretizerFlags& dflags) {
  std::filesystem::create_directories(out_dir);
  iml_model* model_raw = nullptr;
  check(iml_model_load(checkpoint.c_str(), &model_raw));
  ModelPtr model(model_raw);

  SymbolsPtr all = load_any_as_symbols(data, dflags.resolved());
  SymbolsPtr subset;
  const iml_symbols* target = all.get();
  if (split != "all") {
    iml_symbols *train_raw = nullptr, *test_raw = nullptr;
    check(iml_symbols_split(all.get(), train_fraction, split_seed, &train_raw,
                            &test_raw));
    if (split == "train") {
      subset.reset(train_raw);
      iml_symbols_free(test_raw);
    } else {
      subset.reset(test_raw);
      iml_symbols_free(train_raw);
    }
    target = subset.get();
  }

  const EvalOutputs eval = evaluate_model(model.get(), target);
  write_report_files(out_dir, eval);

  // Fig.-style per-step dump: one row per timestep.
  std::string predictions = "id,step,truth,predicted\n";
  double forward_seconds = 0.0;
  size_t forward_steps = 0;
  for (size_t i = 0; i < iml_symbols_count(target); ++i) {
    const char* id = nullptr;
    const int32_t* seq = nullptr;
    const uint8_t* labels = nullptr;
    size_t len = 0;
    check(iml_symbols_get(target, i, &id, &seq, &labels, &len));
    std::vector<double> probs(len * 4);
    const auto before = std::chrono::steady_clock::now();
    check(iml_model_forward(model.get(), seq, len, probs.data(), nullptr));
    forward_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      before)
            .count();
    forward_steps += len;
    char buf[96];
    for (size_t t = 0; t < len; ++t) {
      std::snprintf(buf, sizeof(buf), "%s,%zu,%c,%c\n", id, t,
                    kLabelChars[labels[t]],
                    kLabelChars[argmax4(probs.data() + 4 * t)]);
      predictions += buf;
    }
  }
  write_file(out_dir + "/predictions.csv", predictions);

  std::printf("accuracy=%.6f\n", eval.report.accuracy);
  if (timing) {
    std::printf("mean_step_latency_us=%.3f\n",
                1e6 * forward_seconds / static_cast<double>(forward_steps));
  }
  return 0;
}

int cmd_compare(const std::string& data, const std::string& out_path,
                uint64_t seed, double train_fraction, const ModelFlags& mflags,
                const DiscretizerFlags& dflags) {
  SymbolsPtr symbols = load_any_as_symbols(data, dflags.resolved());
  iml_symbols *train_raw = nullptr, *test_raw = nullptr;
  check(iml_symbols_split(symbols.get(), train_fraction, seed, &train_raw,
                          &test_raw));
  SymbolsPtr train(train_raw), test(test_raw);

  const char* kinds[] = {"proposed", "standard-lstm", "mlp"};
  std::string table = "model,accuracy,recall,f1\n";
  bool any_failed = false;
  for (const char* kind : kinds) {
    ModelFlags flags = mflags;
    flags.kind = kind;
    const iml_model_config mcfg = flags.resolved(seed);
    iml_model* model_raw = nullptr;
    check(iml_model_build(&mcfg, &model_raw));
    ModelPtr model(model_raw);
    const iml_status train_status = iml_model_train(model.get(), train.get());
    if (train_status != IML_OK) {
      std::fprintf(stderr, "error: %s: %s\n", kind, iml_last_error());
      any_failed = true;
      continue;
    }
    const EvalOutputs eval = evaluate_model(model.get(), test.get());
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f\n", kind,
                  eval.report.accuracy, eval.report.macro_recall,
                  eval.report.macro_f1);
    table += buf;
  }

  std::fputs(table.c_str(), stdout);
  if (!out_path.empty()) write_file(out_path, table);
  if (any_failed) std::exit(static_cast<int>(IML_ERR_DIVERGED));
  return 0;
}

int cmd_predict(const std::string& checkpoint, const std::string& data,
                const DiscretizerFlags& dflags) {
  iml_model* model_raw = nullptr;
  check(iml_model_load(checkpoint.c_str(), &model_raw));
  ModelPtr model(model_raw);
  const iml_discretizer_config dcfg = dflags.resolved();

  std::vector<int32_t> symbols;
  double probs[4] = {0, 0, 0, 0};
  auto emit = [&](double velocity, double yaw_rate) {
    int32_t symbol = 0;
    check(iml_discretize_step(&dcfg, velocity, yaw_rate, &symbol));
    symbols.push_back(symbol);
    check(iml_model_predict_prefix(model.get(), symbols.data(), symbols.size(),
                                   probs));
    std::printf("%zu,%.9f,%.9f,%.9f,%.9f,%c\n", symbols.size() - 1, probs[0],
                probs[1], probs[2], probs[3], kLabelChars[argmax4(probs)]);
  };

  if (data == "-") {
    std::string line;
    size_t line_no = 0;
    while (std::getline(std::cin, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line_no == 1 && line.rfind("id,", 0) == 0) continue;  // header
      std::vector<std::string> fields;
      std::stringstream ss(line);
      std::string field;
      while (std::getline(ss, field, ',')) fields.push_back(field);
      double velocity = 0.0, yaw = 0.0;
      try {
        if (fields.size() == 6) {  // trace CSV row
          velocity = strict_stod(fields[2]);
          yaw = strict_stod(fields[3]);
        } else if (fields.size() == 2) {  // bare velocity,yaw_rate
          velocity = strict_stod(fields[0]);
          yaw = strict_stod(fields[1]);
        } else {
          throw std::invalid_argument("wrong field count");
        }
      } catch (const std::exception&) {
        die(IML_ERR_PARSE,
            "malformed tick row " + std::to_string(line_no) + ": " + line);
      }
      emit(velocity, yaw);
    }
  } else {
    iml_traces* traces_raw = nullptr;
    check(iml_traces_load_csv(data.c_str(), &traces_raw));
    TracesPtr traces(traces_raw);
    if (iml_traces_count(traces.get()) != 1) {
      die(IML_ERR_INVALID_ARGUMENT,
          "predict expects a single trace, file has " +
              std::to_string(iml_traces_count(traces.get())));
    }
    const double *velocity = nullptr, *yaw = nullptr;
    size_t len = 0;
    check(iml_traces_get(traces.get(), 0, nullptr, nullptr, &velocity, &yaw,
                         nullptr, &len));
    for (size_t t = 0; t < len; ++t) emit(velocity[t], yaw[t]);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"intentml: driver intention prediction from intersection "
               "telemetry (library version " +
               std::string(iml_version()) + ")"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI file");
  app.fallthrough();

  uint64_t seed = 1;

  // synth --------------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synth", "Synthesize a labeled maneuver dataset as a trace CSV");
  iml_synth_config synth_cfg{};
  iml_synth_config_default(&synth_cfg);
  std::string synth_out;
  std::vector<long long> counts;
  synth->add_option("--out", synth_out, "Output CSV path")
      ->required()
      ->envname("INTENTML_OUT");
  synth->add_option("--seed", seed, "RNG seed")->envname("INTENTML_SEED");
  synth
      ->add_option("--counts", counts,
                   "Sequences per class as S,P,R,L (default 990,770,660,550)")
      ->delimiter(',')
      ->envname("INTENTML_COUNTS");
  synth->add_option("--length", synth_cfg.length, "Steps per trace")
      ->envname("INTENTML_LENGTH");
  synth->add_option("--dt", synth_cfg.dt, "Seconds per step")
      ->envname("INTENTML_DT");
  synth
      ->add_option("--noise-velocity", synth_cfg.velocity_noise_sigma,
                   "Velocity noise sigma (m/s)")
      ->envname("INTENTML_NOISE_VELOCITY");
  synth
      ->add_option("--noise-yaw", synth_cfg.yaw_noise_sigma,
                   "Yaw-rate noise sigma (rad/s)")
      ->envname("INTENTML_NOISE_YAW");

  // discretize ----------------------------------------------------------
  auto* discretize = app.add_subcommand(
      "discretize", "Convert a trace CSV into a symbol file");
  std::string disc_data, disc_out;
  DiscretizerFlags disc_dflags;
  discretize->add_option("--data", disc_data, "Input trace CSV")->required();
  discretize->add_option("--out", disc_out, "Output symbol file")->required();
  disc_dflags.attach(discretize);

  // train ----------------------------------------------------------------
  auto* train = app.add_subcommand(
      "train", "Discretize, split and train; writes checkpoint and reports");
  std::string train_data, train_out;
  double train_fraction = 0.7;
  ModelFlags train_mflags;
  DiscretizerFlags train_dflags;
  train->add_option("--data", train_data, "Trace CSV or symbol file")
      ->required()
      ->envname("INTENTML_DATA");
  train->add_option("--out", train_out, "Output directory")
      ->required()
      ->envname("INTENTML_OUT");
  train->add_option("--seed", seed, "Split/init/shuffle seed")
      ->envname("INTENTML_SEED");
  train
      ->add_option("--train-fraction", train_fraction,
                   "Train share of the data")
      ->envname("INTENTML_TRAIN_FRACTION");
  train_mflags.attach(train);
  train_dflags.attach(train);

  // eval -----------------------------------------------------------------
  auto* eval = app.add_subcommand(
      "eval", "Evaluate a checkpoint; writes reports and per-step CSV");
  std::string eval_checkpoint, eval_data, eval_out, eval_split = "all";
  uint64_t eval_split_seed = 1;
  double eval_train_fraction = 0.7;
  bool eval_timing = false;
  DiscretizerFlags eval_dflags;
  eval->add_option("--checkpoint", eval_checkpoint, "Checkpoint path")
      ->required();
  eval->add_option("--data", eval_data, "Trace CSV or symbol file")
      ->required();
  eval->add_option("--out", eval_out, "Output directory")->required();
  eval->add_option("--split", eval_split, "Evaluate all/train/test subset")
      ->check(CLI::IsMember({"all", "train", "test"}));
  eval->add_option("--split-seed", eval_split_seed,
                   "Seed that produced the split");
  eval->add_option("--train-fraction", eval_train_fraction,
                   "Train share of the data");
  eval->add_flag("--timing", eval_timing, "Print mean per-step latency");
  eval_dflags.attach(eval);

  // compare ----------------------------------------------------------------
  auto* compare = app.add_subcommand(
      "compare",
      "Train proposed, standard-lstm and mlp on one split; print a table");
  std::string compare_data, compare_out;
  double compare_train_fraction = 0.7;
  ModelFlags compare_mflags;
  DiscretizerFlags compare_dflags;
  compare->add_option("--data", compare_data, "Trace CSV or symbol file")
      ->required();
  compare->add_option("--out", compare_out, "Also write the table here");
  compare->add_option("--seed", seed, "Shared split/init seed")
      ->envname("INTENTML_SEED");
  compare->add_option("--train-fraction", compare_train_fraction,
                      "Train share of the data");
  compare_mflags.attach(compare);
  compare_dflags.attach(compare);

  // predict ----------------------------------------------------------------
  auto* predict = app.add_subcommand(
      "predict", "Stream per-tick intent probabilities for one trace");
  std::string predict_checkpoint, predict_data = "-";
  DiscretizerFlags predict_dflags;
  predict->add_option("--checkpoint", predict_checkpoint, "Checkpoint path")
      ->required();
  predict->add_option(
      "--data", predict_data,
      "Single-trace CSV, or '-' to read rows from standard input");
  predict_dflags.attach(predict);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  if (synth->parsed()) {
    if (!counts.empty()) {
      if (counts.size() != 4) {
        die(IML_ERR_INVALID_ARGUMENT, "--counts wants 4 values: S,P,R,L");
      }
      synth_cfg.count_straight = counts[0];
      synth_cfg.count_stop = counts[1];
      synth_cfg.count_right = counts[2];
      synth_cfg.count_left = counts[3];
    }
    synth_cfg.seed = seed;
    return cmd_synth(synth_cfg, synth_out);
  }
  if (discretize->parsed()) {
    return cmd_discretize(disc_data, disc_out, disc_dflags);
  }
  if (train->parsed()) {
    return cmd_train(train_data, train_out, seed, train_fraction, train_mflags,
                     train_dflags);
  }
  if (eval->parsed()) {
    return cmd_eval(eval_checkpoint, eval_data, eval_out, eval_split,
                    eval_split_seed, eval_train_fraction, eval_timing,
                    eval_dflags);
  }
  if (compare->parsed()) {
    return cmd_compare(compare_data, compare_out, seed, compare_train_fraction,
                       compare_mflags, compare_dflags);
  }
  if (predict->parsed()) {
    return cmd_predict(predict_checkpoint, predict_data, predict_dflags);
  }
  return 1;
}
