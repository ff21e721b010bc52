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

#ifndef SMC_SMC_HPP_
#define SMC_SMC_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "smc/dense_matrix.hpp"
#include "smc/resource_meter.hpp"
#include "smc/sparse_matrix.hpp"
#include "smc/stream_io.hpp"

namespace smc {

struct SmcConfig {
  std::size_t k = 1;
  std::size_t ell = 0;
  std::uint64_t seed = 0;
  // Row trim inside the subspace estimate (threshold max{c, c*delta*ell}).
  double trim_constant = 10.0;
  // Second-copy trims before the W product: rows keeping more than
  // b2_row_cap entries are emptied, then columns keeping more than
  // b2_col_multiplier * m * delta_hat entries are emptied.
  std::size_t b2_row_cap = 2;
  double b2_col_multiplier = 10.0;
};

struct CompletionResult {
  DenseMatrix uhat;  // m x k
  DenseMatrix vhat;  // n x k
  DenseMatrix rhat;  // k x k; (vhat * rhat) orthonormal when effective_rank == k
  ResourceReport resources;
  double delta_hat = 0.0;
  // Columns of vhat that survived finalization; < k means the trailing
  // dependent directions were dropped and the factors zero-padded.
  std::size_t effective_rank = 0;
  bool quality_warning = false;
};

// One-pass completion state machine. Lifecycle:
//   init_batch (first ell columns)  ->  streaming
//   ingest_column for t = ell..n-1, strictly in order
//   finalize once all n columns are consumed
// Holds only W (m x k), the growing vhat (n x k), the accumulator
// ihat (m x k), and one in-flight column at a time: memory stays
// O(k(m+n)) regardless of how many columns stream past.
class SmcState {
 public:
  // Consumes the first ell columns (batch indices 0..ell-1): estimates
  // the sampling rate, splits the batch four ways, fits the column-space
  // basis on copy 1, trims copy 2 and forms W, back-solves the batch
  // rows of vhat from copy 3, seeds ihat from copy 4, then releases the
  // batch, all four copies, and the basis. A rate estimate of zero is a
  // hard DegenerateInputError; an empty W only raises quality_warning.
  static SmcState init_batch(std::size_t m, std::size_t n,
                             const std::vector<SparseColumn>& batch,
                             const SmcConfig& config);

  // Consumes streamed column t (must equal columns_consumed; out of
  // order raises SequencingError, after finalization StateError).
  // Splits the column at rate delta_hat keeping two copies: copy 1
  // solves the new vhat row against W, copy 2 rank-1-updates ihat.
  // Cost is O(k * nnz) per column.
  void ingest_column(const SparseColumn& col, std::size_t t);

  // Requires all n columns consumed. Orthonormalizes vhat through
  // gram_schmidt_R, forms uhat = (4/delta_hat) * ihat * rhat * rhat^T,
  // freezes resource accounting, and retires the state. Rank-deficient
  // vhat downgrades to the surviving columns (effective_rank < k) with
  // zero-padded factors instead of failing.
  CompletionResult finalize();

  enum class Stage { kStreaming, kFinalized };
  Stage phase() const { return phase_; }
  double delta_hat() const { return delta_hat_; }
  std::size_t columns_consumed() const { return consumed_; }
  bool quality_warning() const { return warning_; }
  const DenseMatrix& w() const { return w_; }
  const DenseMatrix& vhat() const { return vhat_; }
  const DenseMatrix& ihat() const { return ihat_; }
  const ResourceMeter& meter() const { return meter_; }

 private:
  SmcState() = default;

  std::size_t m_ = 0;
  std::size_t n_ = 0;
  SmcConfig config_;
  Stage phase_ = Stage::kStreaming;
  double delta_hat_ = 0.0;
  std::uint64_t stream_seed_ = 0;  // per-column seeds derive from this
  std::size_t consumed_ = 0;
  bool warning_ = false;
  DenseMatrix w_;     // m x k
  DenseMatrix vhat_;  // n x k, row t filled when column t is consumed
  DenseMatrix ihat_;  // m x k
  ResourceMeter meter_;
};

// rhat such that (vhat * rhat) has orthonormal columns: the inverse of
// the R factor of a reduced QR. Rank deficiency raises
// RankDeficiencyError naming the offending column; callers that can
// tolerate it downgrade (see SmcState::finalize).
DenseMatrix gram_schmidt_R(const DenseMatrix& vhat);

// clamp(uhat * vhat^T, 0, 1). Deliberately outside resource accounting:
// the m x n output is an optional export, not part of the streaming
// state, and would drown the O(k(m+n)) working-set signal.
DenseMatrix materialize(const CompletionResult& result);

// Drives init_batch / ingest_column / finalize over a one-pass stream.
// The stream's header supplies (m, n); fewer than ell columns raises
// InsufficientDataError before any work.
CompletionResult run_one_pass(ColumnStream& stream, const SmcConfig& config);

// Batch-size guidance: max(ceil(k/(delta*ln m)), ceil(4*k*ln m)).
// The first term is the theory-suggested width; the floor keeps the
// batch wide enough for the subspace estimate at desk scale.
std::size_t suggest_ell(std::size_t k, double delta, std::size_t m);

}  // namespace smc

#endif  // SMC_SMC_HPP_
