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

#ifndef SMC_OBSERVE_HPP_
#define SMC_OBSERVE_HPP_

#include <cstdint>

#include "smc/dense_matrix.hpp"
#include "smc/sparse_matrix.hpp"
#include "smc/truncated_svd.hpp"

namespace smc {

// Synthetic ground truth: an exactly rank-k matrix with entries in [0,1]
// and its rank-k factors.
struct GroundTruth {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  DenseMatrix matrix;  // m x n
  SvdResult svd;       // rank-k factors of matrix
};

// Zero-mean noise with entry-dependent amplitude sigma * min(M_ij, 1-M_ij),
// which keeps M + X inside [0,1] for every draw.
struct NoiseSpec {
  double amplitude = 0.0;  // sigma in [0,1)
  std::uint64_t seed = 0;
};

// matrix = (1/k) * sum_i u_i v_i^T with u_i, v_i entrywise uniform on [0,1].
// Entries are provably in [0,1]; rank is exactly k with probability 1. The
// svd field is computed by truncated_svd and verified against the matrix to
// a relative residual of 1e-8. Draw order: all of U row-major, then all of
// V row-major, from Rng(seed). Requires 1 <= k <= min(m,n)/2.
GroundTruth gen_low_rank(std::size_t m, std::size_t n, std::size_t k,
                         std::uint64_t seed);

// M + X where X_ij is uniform on [-a_ij, a_ij], a_ij = sigma *
// min(M_ij, 1 - M_ij). Entries drawn row-major from Rng(spec.seed).
// sigma = 0 returns the matrix bitwise unchanged.
DenseMatrix apply_noise(const GroundTruth& gt, const NoiseSpec& spec);

// Bernoulli(delta) observation of every entry, independently. Present
// entries keep their value; a present 0.0 is distinguishable from an absent
// entry (explicit mask). Entries are visited column-major (column outer,
// row inner) from Rng(seed). Requires y entries in [0,1], delta in (0,1].
SparseColMatrix sample_entries(const DenseMatrix& y, double delta,
                               std::uint64_t seed);

}  // namespace smc

#endif  // SMC_OBSERVE_HPP_
