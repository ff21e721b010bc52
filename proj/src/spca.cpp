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

#include "smc/spca.hpp"

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "smc/errors.hpp"
#include "smc/linalg.hpp"

namespace smc {

double estimate_delta(const SparseColMatrix& a) {
  if (a.rows == 0 || a.cols == 0) {
    throw InvalidArgumentError("estimate_delta: matrix has no cells");
  }
  std::size_t count = a.nnz();
  if (count == 0) {
    throw DegenerateInputError("estimate_delta: no observed entries");
  }
  return static_cast<double>(count) /
         (static_cast<double>(a.rows) * static_cast<double>(a.cols));
}

SparseColMatrix trim_rows(const SparseColMatrix& a, double delta_hat,
                          double trim_constant) {
  if (!(delta_hat > 0.0) || delta_hat > 1.0) {
    throw InvalidArgumentError("trim_rows: delta_hat must be in (0, 1]");
  }
  if (!(trim_constant > 0.0)) {
    throw InvalidArgumentError("trim_rows: trim constant must be positive");
  }
  const double threshold =
      std::max(trim_constant,
               trim_constant * delta_hat * static_cast<double>(a.cols));
  std::vector<std::size_t> row_count(a.rows, 0);
  for (const SparseColumn& col : a.columns) {
    for (const SparseEntry& e : col.entries) {
      ++row_count[e.row];
    }
  }
  SparseColMatrix out(a.rows, a.cols);
  for (std::size_t t = 0; t < a.cols; ++t) {
    const SparseColumn& col = a.columns[t];
    SparseColumn kept;
    kept.entries.reserve(col.entries.size());
    for (const SparseEntry& e : col.entries) {
      if (static_cast<double>(row_count[e.row]) <= threshold) {
        kept.entries.push_back(e);
      }
    }
    out.columns[t] = std::move(kept);
  }
  return out;
}

DenseMatrix gram_offdiag(const SparseColMatrix& a, ResourceMeter* meter) {
  const std::size_t ell = a.cols;
  if (ell > 10000) {
    throw InvalidArgumentError(
        "gram_offdiag: batch width exceeds the dense 10000-column limit");
  }
  // Row-wise accumulation touches each pair's common rows in increasing
  // row order, so it matches a column-pair merge bit for bit while doing
  // work proportional to sum_r nnz(r)^2 instead of ell^2 merges.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(a.rows);
  std::size_t nnz = 0;
  for (std::size_t t = 0; t < ell; ++t) {
    for (const SparseEntry& e : a.columns[t].entries) {
      rows[e.row].emplace_back(static_cast<std::uint32_t>(t), e.value);
      ++nnz;
    }
  }
  if (meter != nullptr) {
    meter->add_sparse(nnz);  // transient row-major copy
  }
  DenseMatrix phi(ell, ell);
  if (meter != nullptr) {
    meter->add_dense(ell * ell);
  }
  std::size_t flops = 0;
  for (const auto& row : rows) {
    for (std::size_t p = 0; p + 1 < row.size(); ++p) {
      for (std::size_t q = p + 1; q < row.size(); ++q) {
        phi.at(row[p].first, row[q].first) += row[p].second * row[q].second;
        ++flops;
      }
    }
  }
  for (std::size_t i = 0; i < ell; ++i) {
    for (std::size_t j = i + 1; j < ell; ++j) {
      phi.at(j, i) = phi.at(i, j);
    }
  }
  if (meter != nullptr) {
    std::size_t structural = 0;
    for (std::size_t i = 0; i < ell; ++i) {
      for (std::size_t j = 0; j < ell; ++j) {
        if (i != j && phi.at(i, j) != 0.0) {
          ++structural;
        }
      }
    }
    meter->add_flops(Phase::kBatch, flops);
    meter->set_phi_stats(ell * ell, structural);
    meter->release_sparse(nnz);
  }
  return phi;
}

SpcaResult spca(const SparseColMatrix& a, const SpcaConfig& config,
                Rng& rng, double delta_override, ResourceMeter* meter) {
  const std::size_t ell = a.cols;
  if (config.k < 1 || config.k > ell) {
    throw InvalidArgumentError("spca: need 1 <= k <= column count");
  }
  if (!(config.trim_constant > 0.0) || !(config.iteration_constant > 0.0)) {
    throw InvalidArgumentError("spca: constants must be positive");
  }
  SpcaResult result;
  result.delta_hat =
      delta_override > 0.0 ? delta_override : estimate_delta(a);

  SparseColMatrix trimmed = trim_rows(a, result.delta_hat,
                                      config.trim_constant);
  const std::size_t trimmed_nnz = trimmed.nnz();
  if (meter != nullptr) {
    meter->add_sparse(trimmed_nnz);
  }
  DenseMatrix phi = gram_offdiag(trimmed, meter);
  trimmed = SparseColMatrix();
  if (meter != nullptr) {
    meter->release_sparse(trimmed_nnz);
  }

  const std::size_t iterations = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(
             config.iteration_constant * std::log(static_cast<double>(ell)))));
  bool degenerate = false;
  result.q = power_qr(phi, config.k, iterations, rng, &degenerate);
  result.quality_warning = degenerate;
  if (meter != nullptr) {
    // Per round: the ell x ell by ell x k product plus two modified
    // Gram-Schmidt passes over the k columns.
    const std::size_t per_iter =
        ell * ell * config.k + 2 * ell * config.k * config.k;
    meter->add_flops(Phase::kBatch, iterations * per_iter);
    meter->release_dense(ell * ell);
  }
  return result;
}

}  // namespace smc
