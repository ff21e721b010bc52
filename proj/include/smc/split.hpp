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

#ifndef SMC_SPLIT_HPP_
#define SMC_SPLIT_HPP_

#include <cstdint>
#include <vector>

#include "smc/rng.hpp"
#include "smc/sparse_matrix.hpp"

namespace smc {

// Distribution over the number of copies j in {0..b} that receive one
// observed entry:
//   p(j) = (1/delta) * C(b,j) * (delta/b)^j * (1-delta/b)^(b-j)   for j >= 1
//   p(0) = 1 - sum_{j>=1} p(j)
// With entries observed at rate delta, this makes each copy's inclusion
// marginally Bernoulli(delta/b) and the copies mutually independent, so
// the b outputs look like independent subsamples of the source matrix.
// Requires b >= 1 and delta in (0, 1]; p(0) is nonnegative for all such
// inputs (tiny negative roundoff is clamped to zero).
std::vector<double> subset_size_distribution(std::size_t b, double delta);

struct SplitParams {
  std::size_t a = 1;  // copies materialized (1 <= a <= b)
  std::size_t b = 1;  // copies the subset is drawn over
  double delta = 1.0;
};

// Splits one observed column, materializing the first a of b copies.
// Per entry, in row order: draw j by inverse CDF over
// subset_size_distribution (one uniform), then pick the j target copies
// by a partial Fisher-Yates pass over {0..b-1} (j more uniforms).
// Entries routed to copies a..b-1 are dropped without being stored; the
// random stream is identical for every a, so a is a projection, not a
// different distribution. Copies inherit the row ordering.
std::vector<SparseColumn> split_column(const SparseColumn& col,
                                       const SplitParams& params, Rng& rng);

// Splits every column of a. Column t uses its own generator seeded with
// derive_seed(seed, t), so the result is independent of traversal order
// and identical between the batch path and a column-at-a-time stream.
std::vector<SparseColMatrix> split_matrix(const SparseColMatrix& a,
                                          const SplitParams& params,
                                          std::uint64_t seed);

}  // namespace smc

#endif  // SMC_SPLIT_HPP_
