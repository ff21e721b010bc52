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

#include "smc/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smc/errors.hpp"

namespace smc {

std::vector<double> subset_size_distribution(std::size_t b, double delta) {
  if (b < 1) {
    throw InvalidArgumentError("subset_size_distribution: b must be >= 1");
  }
  if (!(delta > 0.0) || delta > 1.0) {
    throw InvalidArgumentError(
        "subset_size_distribution: delta must be in (0, 1]");
  }
  const double q = delta / static_cast<double>(b);
  std::vector<double> p(b + 1, 0.0);
  double tail = 0.0;
  double binom = 1.0;  // C(b, j), updated multiplicatively
  for (std::size_t j = 1; j <= b; ++j) {
    binom *= static_cast<double>(b - j + 1) / static_cast<double>(j);
    p[j] = (1.0 / delta) * binom * std::pow(q, static_cast<double>(j)) *
           std::pow(1.0 - q, static_cast<double>(b - j));
    tail += p[j];
  }
  double p0 = 1.0 - tail;
  if (p0 < -1e-15) {
    throw NumericalError("subset_size_distribution: negative p(0)");
  }
  p[0] = std::max(0.0, p0);
  return p;
}

std::vector<SparseColumn> split_column(const SparseColumn& col,
                                       const SplitParams& params, Rng& rng) {
  const std::size_t a = params.a;
  const std::size_t b = params.b;
  if (a < 1 || a > b) {
    throw InvalidArgumentError("split_column: need 1 <= a <= b");
  }
  const std::vector<double> p = subset_size_distribution(b, params.delta);
  std::vector<SparseColumn> copies(a);
  std::vector<std::size_t> pool(b);
  std::vector<std::size_t> chosen;
  chosen.reserve(b);
  for (const SparseEntry& e : col.entries) {
    // Inverse CDF over p: one uniform selects the subset size j.
    double u = rng.uniform01();
    std::size_t j = b;
    double cum = 0.0;
    for (std::size_t i = 0; i <= b; ++i) {
      cum += p[i];
      if (u < cum) {
        j = i;
        break;
      }
    }
    if (j == 0) {
      continue;
    }
    // Partial Fisher-Yates: the first j pool slots become the subset.
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < j; ++i) {
      std::size_t swap_at = i + static_cast<std::size_t>(rng.uniform_below(
                                    static_cast<std::uint64_t>(b - i)));
      std::swap(pool[i], pool[swap_at]);
    }
    chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(j));
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t c : chosen) {
      if (c < a) {
        copies[c].entries.push_back(e);
      }
    }
  }
  return copies;
}

std::vector<SparseColMatrix> split_matrix(const SparseColMatrix& a,
                                          const SplitParams& params,
                                          std::uint64_t seed) {
  if (params.a < 1 || params.a > params.b) {
    throw InvalidArgumentError("split_matrix: need 1 <= a <= b");
  }
  // Validates b and delta up front even for an empty matrix.
  (void)subset_size_distribution(params.b, params.delta);
  std::vector<SparseColMatrix> out;
  out.reserve(params.a);
  for (std::size_t c = 0; c < params.a; ++c) {
    out.emplace_back(a.rows, a.cols);
  }
  for (std::size_t t = 0; t < a.cols; ++t) {
    Rng rng(derive_seed(seed, t));
    std::vector<SparseColumn> copies = split_column(a.columns[t], params, rng);
    for (std::size_t c = 0; c < params.a; ++c) {
      out[c].columns[t] = std::move(copies[c]);
    }
  }
  return out;
}

}  // namespace smc
