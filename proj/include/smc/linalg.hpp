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

#ifndef SMC_LINALG_HPP_
#define SMC_LINALG_HPP_

#include <cstddef>
#include <vector>

#include "smc/dense_matrix.hpp"
#include "smc/rng.hpp"

namespace smc {

// Entrywise projection onto [lo, hi]. Throws InvalidArgumentError if lo > hi.
DenseMatrix clamp(const DenseMatrix& a, double lo, double hi);

struct QrResult {
  DenseMatrix q;  // m x k, orthonormal columns
  DenseMatrix r;  // k x k, upper triangular, nonnegative diagonal
};

// Thin QR via modified Gram-Schmidt with one re-orthogonalization pass.
// Requires m >= k. The diagonal of R is forced nonnegative so the
// decomposition is unique. A column whose residual norm falls below
// 1e-12 * max|a| raises RankDeficiencyError carrying that column's index.
QrResult qr_decompose(const DenseMatrix& a);

// Inverse of an upper triangular matrix by back substitution. A diagonal
// entry with |r_ii| <= 1e-12 * max|r| raises SingularMatrixError.
DenseMatrix upper_tri_inverse(const DenseMatrix& r);

// Orthogonal iteration: exactly `iterations` rounds of multiply-by-phi then
// re-orthonormalization, starting from a random orthonormal ell x k block
// drawn from rng. phi must be symmetric within 1e-10 (relative to max(1,
// max|phi|)) and k <= ell, iterations >= 1. If orthonormalization meets a
// degenerate column (input rank < k), that column is refilled with fresh
// random entries and the round is retried; *degenerate (when non-null) is
// set when that fallback fired.
DenseMatrix power_qr(const DenseMatrix& phi, std::size_t k,
                     std::size_t iterations, Rng& rng,
                     bool* degenerate = nullptr);

// sin of the largest principal angle between the column spans of v and vhat:
// the operator norm of v^T * (orthonormal complement of vhat), computed
// stably as sigma_max(vhat - v (v^T vhat)). Both inputs must be n x k with
// orthonormal columns within 1e-8. Returns a value in [0, 1]; symmetric in
// its arguments.
double subspace_distance(const DenseMatrix& v, const DenseMatrix& vhat);

struct EighResult {
  std::vector<double> values;  // nonincreasing
  DenseMatrix vectors;         // columns are eigenvectors, same order
};

// Full eigendecomposition of a small symmetric matrix by cyclic Jacobi
// rotations. Intended for k x k workloads (Rayleigh-Ritz blocks, principal
// angles), not large problems.
EighResult symmetric_eigh(const DenseMatrix& a);

}  // namespace smc

#endif  // SMC_LINALG_HPP_
