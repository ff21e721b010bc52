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

#include "smc/observe.hpp"

#include <cmath>

#include "smc/errors.hpp"
#include "smc/rng.hpp"

namespace smc {

GroundTruth gen_low_rank(std::size_t m, std::size_t n, std::size_t k,
                         std::uint64_t seed) {
  if (m == 0 || n == 0)
    throw InvalidArgumentError("gen_low_rank: empty dimensions");
  if (k < 1 || 2 * k > std::min(m, n))
    throw InvalidArgumentError("gen_low_rank: k out of range");

  Rng rng(seed);
  DenseMatrix u(m, k), v(n, k);
  for (double& x : u.data) x = rng.uniform01();
  for (double& x : v.data) x = rng.uniform01();

  GroundTruth gt;
  gt.m = m;
  gt.n = n;
  gt.k = k;
  gt.matrix = DenseMatrix(m, n);
  const double inv_k = 1.0 / static_cast<double>(k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += u.at(i, p) * v.at(j, p);
      gt.matrix.at(i, j) = s * inv_k;
    }

  gt.svd = truncated_svd(gt.matrix, k);
  // The factors must reproduce the matrix: residual check against silent
  // SVD failure.
  double resid = 0.0, total = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double rec = 0.0;
      for (std::size_t p = 0; p < k; ++p)
        rec += gt.svd.u.at(i, p) * gt.svd.s[p] * gt.svd.v.at(j, p);
      double d = gt.matrix.at(i, j) - rec;
      resid += d * d;
      total += gt.matrix.at(i, j) * gt.matrix.at(i, j);
    }
  if (!(std::sqrt(resid) <= 1e-8 * std::sqrt(total)))
    throw NumericalError("gen_low_rank: factor residual check failed");
  return gt;
}

DenseMatrix apply_noise(const GroundTruth& gt, const NoiseSpec& spec) {
  if (!(spec.amplitude >= 0.0 && spec.amplitude < 1.0))
    throw InvalidArgumentError("apply_noise: amplitude outside [0,1)");
  if (spec.amplitude == 0.0) return gt.matrix;

  Rng rng(spec.seed);
  DenseMatrix out = gt.matrix;
  for (double& x : out.data) {
    double a = spec.amplitude * std::min(x, 1.0 - x);
    x += (2.0 * rng.uniform01() - 1.0) * a;
  }
  return out;
}

SparseColMatrix sample_entries(const DenseMatrix& y, double delta,
                               std::uint64_t seed) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw InvalidArgumentError("sample_entries: delta outside (0,1]");
  for (double v : y.data)
    if (!(v >= 0.0 && v <= 1.0))
      throw InvalidArgumentError("sample_entries: entry outside [0,1]");

  Rng rng(seed);
  SparseColMatrix a(y.rows, y.cols);
  for (std::size_t j = 0; j < y.cols; ++j)
    for (std::size_t i = 0; i < y.rows; ++i)
      if (rng.uniform01() < delta)
        a.columns[j].entries.push_back(
            {static_cast<std::uint32_t>(i), y.at(i, j)});
  return a;
}

}  // namespace smc
