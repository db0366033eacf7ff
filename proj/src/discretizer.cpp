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

#include "intentml/errors.hpp"

#include "intentml/discretizer.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace intentml {

void DiscretizerConfig::validate() const {
  if (!std::isfinite(velocity_threshold) || !std::isfinite(yaw_low) ||
      !std::isfinite(yaw_high)) {
    throw std::invalid_argument("discretizer config: non-finite threshold");
  }
  if (velocity_threshold <= 0.0) {
    throw std::invalid_argument(
        "discretizer config: velocity threshold must be > 0");
  }
  if (!(yaw_low < yaw_high)) {
    throw std::invalid_argument("discretizer config: yaw_low must be < yaw_high");
  }
}

int discretize_velocity(double v, const DiscretizerConfig& cfg) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("discretize_velocity: non-finite input");
  }
  return v < cfg.velocity_threshold ? 0 : 1;
}

int discretize_yaw(double y, const DiscretizerConfig& cfg) {
  if (!std::isfinite(y)) {
    throw std::invalid_argument("discretize_yaw: non-finite input");
  }
  if (y < cfg.yaw_low) return 0;
  if (y > cfg.yaw_high) return 2;
  return 1;  // both band edges inclusive
}

int symbolize(int velocity_class, int yaw_class) {
  if (velocity_class < 0 || velocity_class > 1) {
    throw std::invalid_argument("symbolize: velocity class out of range");
  }
  if (yaw_class < 0 || yaw_class > 2) {
    throw std::invalid_argument("symbolize: yaw class out of range");
  }
  return 3 * velocity_class + yaw_class + 1;
}

SymbolSequence symbolize_trace(const ManeuverTrace& trace,
                               const DiscretizerConfig& cfg) {
  cfg.validate();
  SymbolSequence seq;
  seq.id = trace.id;
  seq.symbols.reserve(trace.length());
  seq.labels.assign(trace.length(), trace.maneuver);
  for (int t = 0; t < trace.length(); ++t) {
    seq.symbols.push_back(symbolize(discretize_velocity(trace.velocity[t], cfg),
                                    discretize_yaw(trace.yaw_rate[t], cfg)));
  }
  return seq;
}

std::vector<SymbolSequence> symbolize_traces(
    const std::vector<ManeuverTrace>& traces, const DiscretizerConfig& cfg) {
  std::vector<SymbolSequence> out;
  out.reserve(traces.size());
  for (const ManeuverTrace& t : traces) out.push_back(symbolize_trace(t, cfg));
  return out;
}

namespace {

[[noreturn]] void tsv_error(const std::string& path, std::size_t line,
                            const std::string& what) {
  std::ostringstream oss;
  oss << path << ":" << line << ": " << what;
  throw ParseError(oss.str());
}

}  // namespace

void save_symbols_tsv(const std::vector<SymbolSequence>& sequences,
                      const std::string& path) {
  std::string body;
  for (const SymbolSequence& seq : sequences) {
    body += seq.id;
    body.push_back('\t');
    for (int t = 0; t < seq.length(); ++t) {
      if (t > 0) body.push_back(' ');
      body += std::to_string(seq.symbols[t]);
    }
    body.push_back('\t');
    for (int t = 0; t < seq.length(); ++t) {
      if (t > 0) body.push_back(' ');
      body.push_back(maneuver_char(seq.labels[t]));
    }
    body.push_back('\n');
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<SymbolSequence> load_symbols_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::vector<SymbolSequence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const std::size_t tab1 = line.find('\t');
    const std::size_t tab2 =
        tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos ||
        line.find('\t', tab2 + 1) != std::string::npos) {
      tsv_error(path, line_no, "expected 3 tab-separated fields");
    }

    SymbolSequence seq;
    seq.id = line.substr(0, tab1);
    if (seq.id.empty()) tsv_error(path, line_no, "empty id");

    std::istringstream symbols(line.substr(tab1 + 1, tab2 - tab1 - 1));
    int s = 0;
    while (symbols >> s) {
      if (s < 1 || s > kVocabSize) {
        tsv_error(path, line_no, "symbol " + std::to_string(s) +
                                     " out of range 1.." +
                                     std::to_string(kVocabSize));
      }
      seq.symbols.push_back(s);
    }
    if (!symbols.eof()) tsv_error(path, line_no, "bad symbol field");

    std::istringstream labels(line.substr(tab2 + 1));
    std::string tok;
    while (labels >> tok) {
      if (tok.size() != 1) tsv_error(path, line_no, "bad label '" + tok + "'");
      const auto m = maneuver_from_char(tok[0]);
      if (!m) tsv_error(path, line_no, "bad label '" + tok + "'");
      seq.labels.push_back(*m);
    }

    if (seq.symbols.empty()) tsv_error(path, line_no, "empty symbol sequence");
    if (seq.symbols.size() != seq.labels.size()) {
      tsv_error(path, line_no, "symbol/label length mismatch");
    }
    out.push_back(std::move(seq));
  }
  if (out.empty()) throw ParseError(path + ": no sequences");
  return out;
}

}  // namespace intentml
