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

#ifndef INTENTML_TENSOR_HPP_
#define INTENTML_TENSOR_HPP_

#include <cassert>
#include <cstddef>
#include <vector>

namespace intentml::nn {

using Vec = std::vector<double>;

// Dense row-major matrix, double precision throughout.
struct Tensor2 {
  int rows = 0;
  int cols = 0;
  Vec data;

  Tensor2() = default;
  Tensor2(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  std::size_t size() const { return data.size(); }
  void zero() { data.assign(data.size(), 0.0); }
};

inline double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// y = A x
inline void matvec(const Tensor2& a, const double* x, double* y) {
  for (int r = 0; r < a.rows; ++r) y[r] = dot(a.row(r), x, a.cols);
}

// y += A x
inline void matvec_acc(const Tensor2& a, const double* x, double* y) {
  for (int r = 0; r < a.rows; ++r) y[r] += dot(a.row(r), x, a.cols);
}

// y += A^T x   (y has a.cols entries, x has a.rows entries)
inline void matvec_trans_acc(const Tensor2& a, const double* x, double* y) {
  for (int r = 0; r < a.rows; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    const double* arow = a.row(r);
    for (int c = 0; c < a.cols; ++c) y[c] += arow[c] * xr;
  }
}

// A += u v^T   (u has a.rows entries, v has a.cols entries)
inline void outer_acc(Tensor2& a, const double* u, const double* v) {
  for (int r = 0; r < a.rows; ++r) {
    const double ur = u[r];
    if (ur == 0.0) continue;
    double* arow = a.row(r);
    for (int c = 0; c < a.cols; ++c) arow[c] += ur * v[c];
  }
}

// y += s x
inline void axpy(double s, const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += s * x[i];
}

}  // namespace intentml::nn

#endif  // INTENTML_TENSOR_HPP_
