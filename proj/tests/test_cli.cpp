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
// Drives the installed CLI binary (path in $INTENTML_BIN) end to end.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "intentml/trace.hpp"

namespace fs = std::filesystem;
using namespace intentml;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "intentml_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args, const std::string& stdin_file = "",
                  const std::string& env_prefix = "") {
  const char* bin = std::getenv("INTENTML_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "INTENTML_BIN must point at the CLI binary");
  static int counter = 0;
  const fs::path out = work_dir() / ("out" + std::to_string(counter));
  const fs::path err = work_dir() / ("err" + std::to_string(counter));
  ++counter;
  std::string cmd = env_prefix + std::string(bin) + " " + args;
  if (!stdin_file.empty()) cmd += " < " + stdin_file;
  cmd += " > " + out.string() + " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

const std::string& traces_csv() {
  static const std::string path = [] {
    const fs::path p = work_dir() / "train_data.csv";
    const RunResult r = run_cli("synth --out " + p.string() +
                                " --counts 8,6,6,6 --seed 5");
    REQUIRE(r.exit_code == 0);
    return p.string();
  }();
  return path;
}

const std::string& trained_dir() {
  static const std::string dir = [] {
    const fs::path d = work_dir() / "run1";
    const RunResult r = run_cli(
        "train --data " + traces_csv() + " --out " + d.string() +
        " --seed 5 --epochs 3 --hidden 8 --attention-dim 6 --batch 4");
    REQUIRE(r.exit_code == 0);
    return d.string();
  }();
  return dir;
}

}  // namespace

TEST_CASE("synth prints the class summary and is byte-deterministic") {
  const fs::path a = work_dir() / "synth_a.csv";
  const fs::path b = work_dir() / "synth_b.csv";
  const RunResult ra =
      run_cli("synth --out " + a.string() + " --counts 2,1,1,1 --seed 9");
  CHECK(ra.exit_code == 0);
  CHECK(ra.out == "S:2 P:1 R:1 L:1\n");

  const RunResult rb =
      run_cli("synth --out " + b.string() + " --counts 2,1,1,1 --seed 9");
  CHECK(rb.exit_code == 0);
  CHECK(slurp(a) == slurp(b));

  const fs::path c = work_dir() / "synth_c.csv";
  run_cli("synth --out " + c.string() + " --counts 2,1,1,1 --seed 10");
  CHECK(slurp(a) != slurp(c));
}

TEST_CASE("synth rejects bad counts with a single error line") {
  const RunResult r = run_cli("synth --out " +
                              (work_dir() / "x.csv").string() +
                              " --counts 1,2,3");
  CHECK(r.exit_code != 0);
  CHECK(r.err.rfind("error: ", 0) == 0);
  CHECK(lines_of(r.err).size() == 1);
}

TEST_CASE("discretize writes a loadable symbol file") {
  const fs::path out = work_dir() / "symbols.tsv";
  const RunResult r =
      run_cli("discretize --data " + traces_csv() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out == "sequences:26\n");
  CHECK(lines_of(slurp(out)).size() == 26);
}

TEST_CASE("train writes checkpoint, history and reports") {
  const std::string dir = trained_dir();
  CHECK(fs::exists(dir + "/checkpoint.iml"));
  CHECK(fs::exists(dir + "/history.csv"));
  CHECK(fs::exists(dir + "/report.txt"));
  CHECK(fs::exists(dir + "/metrics.kv"));
  CHECK(fs::exists(dir + "/confusion.csv"));

  const auto history = lines_of(slurp(dir + "/history.csv"));
  REQUIRE(history.size() >= 2);
  CHECK(history[0] == "epoch,train_loss,train_accuracy,val_loss,val_accuracy");
  CHECK(history.size() <= 4);  // 3 epochs + header
}

TEST_CASE("train is byte-deterministic under a fixed seed") {
  const fs::path d2 = work_dir() / "run2";
  const RunResult r = run_cli(
      "train --data " + traces_csv() + " --out " + d2.string() +
      " --seed 5 --epochs 3 --hidden 8 --attention-dim 6 --batch 4");
  REQUIRE(r.exit_code == 0);
  for (const char* name :
       {"/checkpoint.iml", "/history.csv", "/report.txt", "/metrics.kv",
        "/confusion.csv"}) {
    CAPTURE(name);
    CHECK(slurp(trained_dir() + name) == slurp(d2.string() + name));
  }
}

TEST_CASE("eval prints an accuracy consistent with its confusion CSV") {
  const fs::path dir = work_dir() / "eval1";
  const RunResult r = run_cli("eval --checkpoint " + trained_dir() +
                              "/checkpoint.iml --data " + traces_csv() +
                              " --out " + dir.string() +
                              " --split test --split-seed 5");
  REQUIRE(r.exit_code == 0);

  double printed = -1.0;
  for (const std::string& line : lines_of(r.out)) {
    if (line.rfind("accuracy=", 0) == 0) printed = std::stod(line.substr(9));
  }
  REQUIRE(printed >= 0.0);

  const auto rows = lines_of(slurp(dir / "confusion.csv"));
  REQUIRE(rows.size() == 5);
  long long diag = 0, total = 0;
  for (int t = 0; t < 4; ++t) {
    const auto fields = split_csv(rows[t + 1]);
    REQUIRE(fields.size() == 5);
    for (int p = 0; p < 4; ++p) {
      const long long v = std::stoll(fields[p + 1]);
      total += v;
      if (p == t) diag += v;
    }
  }
  CHECK(printed ==
        doctest::Approx(static_cast<double>(diag) / total).epsilon(1e-6));

  // one prediction row per timestep (26 traces * 110 steps in 'all' mode)
  const fs::path dir_all = work_dir() / "eval_all";
  const RunResult rall = run_cli("eval --checkpoint " + trained_dir() +
                                 "/checkpoint.iml --data " + traces_csv() +
                                 " --out " + dir_all.string());
  REQUIRE(rall.exit_code == 0);
  CHECK(lines_of(slurp(dir_all / "predictions.csv")).size() == 1 + 26 * 110);
}

TEST_CASE("predict streams one line per tick with unit-sum probabilities") {
  // single-trace file
  const fs::path single = work_dir() / "single.csv";
  {
    SynthConfig cfg;
    cfg.count_straight = cfg.count_stop = cfg.count_right = cfg.count_left = 1;
    cfg.seed = 5;
    auto traces = synth_dataset(cfg);
    save_traces_csv({traces[1]}, single.string());  // the Stop trace
  }

  const RunResult r = run_cli("predict --checkpoint " + trained_dir() +
                              "/checkpoint.iml --data " + single.string());
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 110);
  for (const std::string& line : lines) {
    const auto fields = split_csv(line);
    REQUIRE(fields.size() == 6);
    const double sum = std::stod(fields[1]) + std::stod(fields[2]) +
                       std::stod(fields[3]) + std::stod(fields[4]);
    CHECK(std::abs(sum - 1.0) <= 1e-6);
    CHECK(fields[5].size() == 1);
  }

  // final argmax equals eval's last-step prediction on the same trace
  const fs::path dir = work_dir() / "eval_single";
  const RunResult re = run_cli("eval --checkpoint " + trained_dir() +
                               "/checkpoint.iml --data " + single.string() +
                               " --out " + dir.string());
  REQUIRE(re.exit_code == 0);
  const auto rows = lines_of(slurp(dir / "predictions.csv"));
  REQUIRE(rows.size() == 1 + 110);
  const auto last_eval = split_csv(rows.back());
  const auto last_tick = split_csv(lines.back());
  CHECK(last_eval[3] == last_tick[5]);
}

TEST_CASE("predict accepts rows on standard input and rejects bad ticks") {
  const fs::path good = work_dir() / "stdin_good.txt";
  {
    std::ofstream out(good);
    out << "13.1,0.0\n12.9,0.1\n9.5,-0.2\n";
  }
  const RunResult r = run_cli("predict --checkpoint " + trained_dir() +
                                  "/checkpoint.iml --data -",
                              good.string());
  REQUIRE(r.exit_code == 0);
  CHECK(lines_of(r.out).size() == 3);

  const fs::path bad = work_dir() / "stdin_bad.txt";
  {
    std::ofstream out(bad);
    out << "13.1,0.0\nnot,a,tick\n";
  }
  const RunResult rb = run_cli("predict --checkpoint " + trained_dir() +
                                   "/checkpoint.iml --data -",
                               bad.string());
  CHECK(rb.exit_code != 0);
  CHECK(rb.err.find("error: malformed tick row 2") != std::string::npos);
}

TEST_CASE("compare emits a 3x3 table and honors the shared seed") {
  const fs::path out = work_dir() / "table.csv";
  const std::string args = "compare --data " + traces_csv() + " --out " +
                           out.string() +
                           " --seed 5 --epochs 2 --hidden 8 --attention-dim 6"
                           " --batch 4";
  const RunResult a = run_cli(args);
  REQUIRE(a.exit_code == 0);
  const auto rows = lines_of(slurp(out));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "model,accuracy,recall,f1");
  CHECK(split_csv(rows[1])[0] == "proposed");
  CHECK(split_csv(rows[2])[0] == "standard-lstm");
  CHECK(split_csv(rows[3])[0] == "mlp");
  for (int i = 1; i <= 3; ++i) CHECK(split_csv(rows[i]).size() == 4);
  CHECK(a.out == slurp(out));

  const RunResult b = run_cli(args);
  CHECK(b.out == a.out);
}

TEST_CASE("train accepts a symbol file as input") {
  const fs::path symbols = work_dir() / "train_input.tsv";
  REQUIRE(run_cli("discretize --data " + traces_csv() + " --out " +
                  symbols.string())
              .exit_code == 0);
  const fs::path dir = work_dir() / "run_symbols";
  const RunResult r = run_cli(
      "train --data " + symbols.string() + " --out " + dir.string() +
      " --seed 5 --epochs 1 --hidden 8 --attention-dim 6 --batch 4");
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "checkpoint.iml"));
}

TEST_CASE("flags can come from INTENTML_* environment variables") {
  const fs::path a = work_dir() / "env_a.csv";
  const fs::path b = work_dir() / "env_b.csv";
  const RunResult ra = run_cli(
      "synth --out " + a.string() + " --counts 2,1,1,1 --seed 33");
  REQUIRE(ra.exit_code == 0);
  const RunResult rb =
      run_cli("synth --out " + b.string() + " --counts 2,1,1,1", "",
              "INTENTML_SEED=33 ");
  REQUIRE(rb.exit_code == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("train dispatches to the baseline models and layers stack") {
  for (const char* extra :
       {"--model standard-lstm", "--model mlp", "--layers 2"}) {
    CAPTURE(extra);
    const fs::path dir =
        work_dir() / ("run_" + std::to_string(std::hash<std::string>{}(extra)));
    const RunResult r = run_cli(
        "train --data " + traces_csv() + " --out " + dir.string() +
        " --seed 5 --epochs 1 --hidden 8 --attention-dim 6 --batch 4 " +
        extra);
    REQUIRE(r.exit_code == 0);
    const RunResult re = run_cli("eval --checkpoint " + dir.string() +
                                 "/checkpoint.iml --data " + traces_csv() +
                                 " --out " + dir.string() + "_eval");
    CHECK(re.exit_code == 0);
  }
}

TEST_CASE("eval rejects a corrupt checkpoint with the corrupt status") {
  const fs::path broken = work_dir() / "broken.iml";
  {
    const std::string bytes = slurp(trained_dir() + "/checkpoint.iml");
    std::ofstream out(broken, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 3));
  }
  const RunResult r = run_cli("eval --checkpoint " + broken.string() +
                              " --data " + traces_csv() + " --out " +
                              (work_dir() / "broken_eval").string());
  CHECK(r.exit_code == 6);  // IML_ERR_CORRUPT
  CHECK(r.err.rfind("error: ", 0) == 0);
}

TEST_CASE("a config file supplies defaults that flags override") {
  const fs::path ini = work_dir() / "opts.ini";
  {
    std::ofstream out(ini);
    out << "[synth]\nseed=33\n";
  }
  const fs::path a = work_dir() / "cfg_a.csv";
  const fs::path b = work_dir() / "cfg_b.csv";
  const fs::path c = work_dir() / "cfg_c.csv";
  REQUIRE(run_cli("synth --config " + ini.string() + " --out " + a.string() +
                  " --counts 2,1,1,1")
              .exit_code == 0);
  REQUIRE(run_cli("synth --out " + b.string() + " --counts 2,1,1,1 --seed 33")
              .exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  // an explicit flag wins over the config file
  REQUIRE(run_cli("synth --config " + ini.string() + " --out " + c.string() +
                  " --counts 2,1,1,1 --seed 34")
              .exit_code == 0);
  CHECK(slurp(a) != slurp(c));
}

TEST_CASE("eval --timing reports a latency line") {
  const fs::path dir = work_dir() / "eval_timing";
  const RunResult r = run_cli("eval --checkpoint " + trained_dir() +
                              "/checkpoint.iml --data " + traces_csv() +
                              " --out " + dir.string() + " --timing");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("mean_step_latency_us=") != std::string::npos);
}

TEST_CASE("errors exit nonzero with a machine-parsable line") {
  const RunResult r = run_cli("train --data /nonexistent.csv --out " +
                              (work_dir() / "nope").string());
  CHECK(r.exit_code == 2);  // IML_ERR_IO
  REQUIRE(!r.err.empty());
  CHECK(r.err.rfind("error: ", 0) == 0);

  const RunResult rb =
      run_cli("eval --checkpoint /nonexistent.ckpt --data " + traces_csv() +
              " --out " + (work_dir() / "nope2").string());
  CHECK(rb.exit_code == 2);
  CHECK(rb.err.rfind("error: ", 0) == 0);

  const RunResult rc = run_cli("bogus-subcommand");
  CHECK(rc.exit_code != 0);
  CHECK(rc.err.rfind("error: ", 0) == 0);
}

TEST_CASE("help exits zero") {
  const RunResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("synth") != std::string::npos);
  CHECK(r.out.find("predict") != std::string::npos);
}
