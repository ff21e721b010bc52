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

#ifndef SMC_HARNESS_HPP_
#define SMC_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smc/dense_matrix.hpp"
#include "smc/observe.hpp"
#include "smc/resource_meter.hpp"
#include "smc/smc.hpp"
#include "smc/sparse_matrix.hpp"

namespace smc {

struct ExperimentConfig {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  double delta = 0.0;
  double noise = 0.0;
  std::size_t ell = 0;  // 0 means auto (suggest_ell, clamped to n)
  std::uint64_t seed = 0;
};

struct EvalReport {
  double rel_mse = 0.0;  // |M_hat - M|_F^2 / |M|_F^2
  double abs_mse = 0.0;  // |M_hat - M|_F^2 / (m n)
  std::optional<double> v_subspace_error;
  std::optional<double> oracle_rel_mse;
  std::optional<ResourceReport> resources;
  std::optional<double> wall_time_seconds;  // opt-in, never in default output
};

struct SweepRow {
  ExperimentConfig config;
  EvalReport report;
  std::string error;  // nonempty when this row failed; other rows unaffected
};

// Full-memory spectral baseline: clamp((1/delta) * rank-k truncation of
// the observed matrix, 0, 1). The calibration reference every accuracy
// band is frozen against.
DenseMatrix oracle_complete(const SparseColMatrix& a, double delta,
                            std::size_t k);

// Error metrics against the ground truth. When a completion result is
// supplied, its raw right factor is orthonormalized (greedily dropping
// dependent columns if it is rank-deficient) and compared against the
// truth's top-k right singular subspace; the result's resource report is
// passed through.
EvalReport evaluate(const GroundTruth& gt, const DenseMatrix& m_hat,
                    const CompletionResult* result = nullptr);

// Parameter-regime advisories (never errors): checks the sampling rate
// against delta >= 4 k max(k/n, ln^2(m)/m, k ln(m)/m), the asymptotic
// sufficiency condition read as a factor-of-4 inequality at finite scale.
std::vector<std::string> regime_warnings(const ExperimentConfig& config);

// Runs each config end to end: synthesize, write a stream file, complete
// in one pass, evaluate against the truth and the oracle. Per-row
// failures are recorded in the row and never abort the sweep. Rows come
// back in input order. Seed plan per row: ground truth from seed, noise
// from derive_seed(seed, 1), sampling from derive_seed(seed, 2), and the
// same seed drives the completion, exactly as the CLI does it.
std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& configs);

// Factors file (text, version 1):
//   smcf 1
//   uhat M K   followed by M rows of K values
//   vhat N K   followed by N rows
//   rhat K K   followed by K rows
//   resources  followed by fixed "name value" lines
//   end
void write_factors(const std::string& path, const CompletionResult& result);
CompletionResult read_factors(const std::string& path);

}  // namespace smc

#endif  // SMC_HARNESS_HPP_
