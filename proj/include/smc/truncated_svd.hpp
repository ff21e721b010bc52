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

#ifndef SMC_TRUNCATED_SVD_HPP_
#define SMC_TRUNCATED_SVD_HPP_

#include <cstddef>
#include <vector>

#include "smc/dense_matrix.hpp"
#include "smc/sparse_matrix.hpp"

namespace smc {

// Top-k singular triplets. Invariants: u and v have orthonormal columns
// within 1e-10; s is nonincreasing and nonnegative.
struct SvdResult {
  DenseMatrix u;          // m x k
  std::vector<double> s;  // length k
  DenseMatrix v;          // n x k
};

// Top-k singular triplets by alternating orthogonal iteration on A and A^T
// (the Gram matrix is never formed, so sparse inputs stay cheap). The
// iteration starts from a fixed internal seed, making the result a pure
// function of the input. Directions beyond the numerical rank come back
// with singular value 0 and deterministically completed orthonormal
// columns. Throws NonConvergenceError if the subspace has not stagnated
// within max_iterations alternating rounds; the accuracy contract (1e-8 in
// values, 1e-6 in subspace distance) holds whenever s_k / s_{k+1} >= 1.01.
SvdResult truncated_svd(const DenseMatrix& a, std::size_t k,
                        std::size_t max_iterations = 20000);
SvdResult truncated_svd(const SparseColMatrix& a, std::size_t k,
                        std::size_t max_iterations = 20000);

}  // namespace smc

#endif  // SMC_TRUNCATED_SVD_HPP_
