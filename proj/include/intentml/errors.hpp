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

#ifndef INTENTML_ERRORS_HPP_
#define INTENTML_ERRORS_HPP_

#include <stdexcept>

namespace intentml {

// Distinct categories so the C API can map failures onto stable status
// codes. Contract violations use std::invalid_argument directly.

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input files (CSV/TSV rows, headers).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checkpoint integrity failures (bad magic, checksum, truncation).
struct CorruptError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace intentml

#endif  // INTENTML_ERRORS_HPP_
