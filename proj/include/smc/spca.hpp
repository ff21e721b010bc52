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

#ifndef SMC_SPCA_HPP_
#define SMC_SPCA_HPP_

#include <cstddef>

#include "smc/dense_matrix.hpp"
#include "smc/resource_meter.hpp"
#include "smc/rng.hpp"
#include "smc/sparse_matrix.hpp"

namespace smc {

struct SpcaConfig {
  std::size_t k = 1;
  double trim_constant = 10.0;
  double iteration_constant = 10.0;
};

struct SpcaResult {
  // ell x k, orthonormal columns; estimates the top-k right singular
  // subspace of the matrix the batch subsamples.
  DenseMatrix q;
  // The sampling-rate estimate the trim threshold used.
  double delta_hat = 0.0;
  // True when the spectrum had fewer than k usable directions and
  // some columns were refilled at random; downstream quality suffers
  // but the output is still orthonormal.
  bool quality_warning = false;
};

// Fraction of observed entries, nnz / (m * ell). The presence of an entry
// is the observation mask; a stored 0.0 counts as observed.
// Empty mask raises DegenerateInputError (everything downstream divides
// by this estimate).
double estimate_delta(const SparseColMatrix& a);

// Empties every row whose observed-entry count across the batch exceeds
// max{trim_constant, trim_constant * delta_hat * ell}. Surviving entries
// are untouched; the matrix keeps its shape.
SparseColMatrix trim_rows(const SparseColMatrix& a, double delta_hat,
                          double trim_constant);

// Off-diagonal Gram matrix: entry (i,j), i != j, is the inner product of
// columns i and j over their common observed rows (summed in increasing
// row order); the diagonal is exactly zero. Each unordered pair is
// accumulated once and mirrored, so the result is bitwise symmetric.
// Requires ell <= 10000 (dense ell x ell allocation).
// When a meter is given, the multiply-add count (one per common row per
// pair) is charged to the batch phase and the dense/sparse-equivalent
// sizes of the result are recorded (sparse-equivalent = the number of
// nonzero off-diagonal cells, both triangles).
DenseMatrix gram_offdiag(const SparseColMatrix& a,
                         ResourceMeter* meter = nullptr);

// Full pipeline: rate estimate, row trim, off-diagonal Gram, then
// ceil(iteration_constant * ln ell) rounds of orthogonal iteration
// (at least one). delta_override > 0 substitutes the caller's rate
// estimate for the internally computed one; the streaming pipeline
// passes its batch-level estimate down so a single number drives all
// scaling decisions. Degenerate spectra surface as quality_warning,
// never as a hard error.
SpcaResult spca(const SparseColMatrix& a, const SpcaConfig& config,
                Rng& rng, double delta_override = -1.0,
                ResourceMeter* meter = nullptr);

}  // namespace smc

#endif  // SMC_SPCA_HPP_
