// Copyright 2026 The smc Authors.
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

#ifndef SMC_DENSE_MATRIX_HPP_
#define SMC_DENSE_MATRIX_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "smc/errors.hpp"

namespace smc {

// Row-major dense matrix. Invariants: data.size() == rows * cols and every
// stored value is finite. Construction sites that ingest external values
// (parsers, generators) must call all_finite() before handing one out.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool all_finite() const {
    for (double v : data) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }
};

inline double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::fabs(v));
  return m;
}

inline double frobenius_norm_sq(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return s;
}

// C = A * B.
inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows)
    throw InvalidArgumentError("matmul: inner dimensions disagree");
  DenseMatrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t l = 0; l < a.cols; ++l) {
      const double ail = a.at(i, l);
      if (ail == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j)
        c.at(i, j) += ail * b.at(l, j);
    }
  }
  return c;
}

// C = A^T * B.
inline DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows)
    throw InvalidArgumentError("matmul_at_b: row counts disagree");
  DenseMatrix c(a.cols, b.cols);
  for (std::size_t l = 0; l < a.rows; ++l) {
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double ali = a.at(l, i);
      if (ali == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j)
        c.at(i, j) += ali * b.at(l, j);
    }
  }
  return c;
}

// C = A * B^T.
inline DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.cols)
    throw InvalidArgumentError("matmul_a_bt: column counts disagree");
  DenseMatrix c(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.rows; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < a.cols; ++l) s += a.at(i, l) * b.at(j, l);
      c.at(i, j) = s;
    }
  }
  return c;
}

inline DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

inline DenseMatrix identity(std::size_t n) {
  DenseMatrix e(n, n);
  for (std::size_t i = 0; i < n; ++i) e.at(i, i) = 1.0;
  return e;
}

}  // namespace smc

#endif  // SMC_DENSE_MATRIX_HPP_
