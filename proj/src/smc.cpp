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

#include "smc/smc.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "smc/errors.hpp"
#include "smc/linalg.hpp"
#include "smc/spca.hpp"
#include "smc/split.hpp"

namespace smc {
namespace {

void validate_column(const SparseColumn& col, std::size_t m) {
  std::int64_t prev = -1;
  for (const SparseEntry& e : col.entries) {
    if (e.row >= m) {
      throw InvalidArgumentError("column entry row index out of range");
    }
    if (static_cast<std::int64_t>(e.row) <= prev) {
      throw InvalidArgumentError("column entries must be strictly "
                                 "increasing by row");
    }
    prev = static_cast<std::int64_t>(e.row);
  }
}

// dst[row(e), :] += value(e) * src[t, :] summed over columns t of a.
// Returns the multiply-add count, nnz(a) * k.
std::size_t scatter_rows(const SparseColMatrix& a, const DenseMatrix& src,
                         DenseMatrix& dst) {
  const std::size_t k = src.cols;
  std::size_t flops = 0;
  for (std::size_t t = 0; t < a.cols; ++t) {
    for (const SparseEntry& e : a.columns[t].entries) {
      for (std::size_t j = 0; j < k; ++j) {
        dst.at(e.row, j) += e.value * src.at(t, j);
      }
      flops += k;
    }
  }
  return flops;
}

// dst[t, :] += value(e) * src[row(e), :]: the transpose-product rows.
std::size_t gather_rows(const SparseColMatrix& a, const DenseMatrix& src,
                        DenseMatrix& dst) {
  const std::size_t k = src.cols;
  std::size_t flops = 0;
  for (std::size_t t = 0; t < a.cols; ++t) {
    for (const SparseEntry& e : a.columns[t].entries) {
      for (std::size_t j = 0; j < k; ++j) {
        dst.at(t, j) += e.value * src.at(e.row, j);
      }
      flops += k;
    }
  }
  return flops;
}

// Empties rows with more than row_cap entries, then columns with more
// than col_cap entries, in place. Returns entries removed.
std::size_t trim_second_copy(SparseColMatrix& b2, std::size_t row_cap,
                             double col_cap) {
  std::size_t removed = 0;
  std::vector<std::size_t> row_count(b2.rows, 0);
  for (const SparseColumn& col : b2.columns) {
    for (const SparseEntry& e : col.entries) {
      ++row_count[e.row];
    }
  }
  for (SparseColumn& col : b2.columns) {
    SparseColumn kept;
    kept.entries.reserve(col.entries.size());
    for (const SparseEntry& e : col.entries) {
      if (row_count[e.row] <= row_cap) {
        kept.entries.push_back(e);
      }
    }
    removed += col.entries.size() - kept.entries.size();
    col = std::move(kept);
  }
  for (SparseColumn& col : b2.columns) {
    if (static_cast<double>(col.entries.size()) > col_cap) {
      removed += col.entries.size();
      col.entries.clear();
    }
  }
  return removed;
}

bool all_zero(const DenseMatrix& a) {
  for (double v : a.data) {
    if (v != 0.0) {
      return false;
    }
  }
  return true;
}

}  // namespace

SmcState SmcState::init_batch(std::size_t m, std::size_t n,
                              const std::vector<SparseColumn>& batch,
                              const SmcConfig& config) {
  if (m < 1 || n < 1) {
    throw InvalidArgumentError("init_batch: dimensions must be positive");
  }
  if (config.k < 1 || config.k > config.ell || config.ell > n) {
    throw InvalidArgumentError("init_batch: need 1 <= k <= ell <= n");
  }
  if (batch.size() != config.ell) {
    throw InvalidArgumentError("init_batch: expected exactly ell columns, got " +
                               std::to_string(batch.size()));
  }
  if (!(config.trim_constant > 0.0) || !(config.b2_col_multiplier > 0.0)) {
    throw InvalidArgumentError("init_batch: constants must be positive");
  }
  const std::size_t ell = config.ell;
  const std::size_t k = config.k;

  SmcState s;
  s.m_ = m;
  s.n_ = n;
  s.config_ = config;
  s.stream_seed_ = derive_seed(config.seed, 13);

  SparseColMatrix ab(m, ell);
  for (std::size_t t = 0; t < ell; ++t) {
    validate_column(batch[t], m);
    ab.columns[t] = batch[t];
  }
  const std::size_t ab_nnz = ab.nnz();
  s.meter_.add_sparse(ab_nnz);
  s.delta_hat_ = estimate_delta(ab);  // zero mask is a hard error

  SplitParams batch_split{4, 4, s.delta_hat_};
  std::vector<SparseColMatrix> copies =
      split_matrix(ab, batch_split, derive_seed(config.seed, 12));
  std::size_t copies_nnz = 0;
  for (const SparseColMatrix& c : copies) {
    copies_nnz += c.nnz();
  }
  s.meter_.add_sparse(copies_nnz);
  s.meter_.release_sparse(ab_nnz);
  ab = SparseColMatrix();

  // Copy 1: column-space basis.
  Rng spca_rng(derive_seed(config.seed, 11));
  SpcaConfig spca_config;
  spca_config.k = k;
  spca_config.trim_constant = config.trim_constant;
  SpcaResult basis =
      spca(copies[0], spca_config, spca_rng, s.delta_hat_, &s.meter_);
  s.warning_ = basis.quality_warning;
  s.meter_.add_dense(ell * k);
  s.meter_.release_sparse(copies[0].nnz());
  copies[0] = SparseColMatrix();

  // Copy 2: aggressive trims, then W.
  const double col_cap =
      config.b2_col_multiplier * static_cast<double>(m) * s.delta_hat_;
  std::size_t removed =
      trim_second_copy(copies[1], config.b2_row_cap, col_cap);
  s.meter_.release_sparse(removed);
  s.w_ = DenseMatrix(m, k);
  s.meter_.add_dense(m * k);
  s.meter_.add_flops(Phase::kBatch, scatter_rows(copies[1], basis.q, s.w_));
  s.meter_.release_sparse(copies[1].nnz());
  copies[1] = SparseColMatrix();
  s.meter_.release_dense(ell * k);
  basis.q = DenseMatrix();

  // Copy 3: batch rows of vhat, solved against W.
  s.vhat_ = DenseMatrix(n, k);
  s.meter_.add_dense(n * k);
  s.meter_.add_flops(Phase::kBatch, gather_rows(copies[2], s.w_, s.vhat_));
  s.meter_.release_sparse(copies[2].nnz());
  copies[2] = SparseColMatrix();

  // Copy 4: seed the left-factor accumulator.
  s.ihat_ = DenseMatrix(m, k);
  s.meter_.add_dense(m * k);
  s.meter_.add_flops(Phase::kBatch, scatter_rows(copies[3], s.vhat_, s.ihat_));
  s.meter_.release_sparse(copies[3].nnz());
  copies.clear();

  if (all_zero(s.w_)) {
    s.warning_ = true;
  }
  s.consumed_ = ell;
  for (std::size_t t = 0; t < ell; ++t) {
    s.meter_.column_consumed();
  }
  s.phase_ = Stage::kStreaming;
  return s;
}

void SmcState::ingest_column(const SparseColumn& col, std::size_t t) {
  if (phase_ == Stage::kFinalized) {
    throw StateError("ingest_column: state already finalized");
  }
  if (consumed_ >= n_) {
    throw StateError("ingest_column: all " + std::to_string(n_) +
                     " columns already consumed");
  }
  if (t != consumed_) {
    throw SequencingError("ingest_column: expected column " +
                          std::to_string(consumed_) + ", got " +
                          std::to_string(t));
  }
  validate_column(col, m_);
  const std::size_t k = config_.k;
  meter_.add_sparse(col.nnz());

  Rng rng(derive_seed(stream_seed_, t));
  SplitParams stream_split{2, 4, delta_hat_};
  std::vector<SparseColumn> copies = split_column(col, stream_split, rng);
  const std::size_t nnz1 = copies[0].nnz();
  const std::size_t nnz2 = copies[1].nnz();
  meter_.add_sparse(nnz1 + nnz2);

  for (const SparseEntry& e : copies[0].entries) {
    for (std::size_t j = 0; j < k; ++j) {
      vhat_.at(t, j) += e.value * w_.at(e.row, j);
    }
  }
  for (const SparseEntry& e : copies[1].entries) {
    for (std::size_t j = 0; j < k; ++j) {
      ihat_.at(e.row, j) += e.value * vhat_.at(t, j);
    }
  }
  meter_.add_flops(Phase::kStream, (nnz1 + nnz2) * k);

  meter_.release_sparse(col.nnz() + nnz1 + nnz2);
  ++consumed_;
  meter_.column_consumed();
}

DenseMatrix gram_schmidt_R(const DenseMatrix& vhat) {
  if (vhat.rows < vhat.cols || vhat.cols < 1) {
    throw InvalidArgumentError("gram_schmidt_R: need rows >= cols >= 1");
  }
  QrResult qr = qr_decompose(vhat);
  return upper_tri_inverse(qr.r);
}

CompletionResult SmcState::finalize() {
  if (phase_ == Stage::kFinalized) {
    throw StateError("finalize: state already finalized");
  }
  if (consumed_ != n_) {
    throw StateError("finalize: consumed " + std::to_string(consumed_) +
                     " of " + std::to_string(n_) + " columns");
  }
  const std::size_t k = config_.k;

  // Greedy downgrade: start with all columns; every rank failure names a
  // column, which is dropped before retrying, so the surviving set is the
  // in-order maximal independent prefix structure the QR itself certifies.
  std::vector<std::size_t> kept(k);
  for (std::size_t j = 0; j < k; ++j) {
    kept[j] = j;
  }
  DenseMatrix rhat_small;
  while (!kept.empty()) {
    DenseMatrix vs(n_, kept.size());
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < kept.size(); ++j) {
        vs.at(i, j) = vhat_.at(i, kept[j]);
      }
    }
    meter_.add_dense(n_ * kept.size());          // column subset
    meter_.add_dense(n_ * kept.size() +
                     kept.size() * kept.size());  // QR workspace
    std::size_t failed = kept.size();
    try {
      rhat_small = gram_schmidt_R(vs);
    } catch (const RankDeficiencyError& e) {
      failed = e.column();
    } catch (const SingularMatrixError& e) {
      failed = e.index();
    }
    meter_.add_flops(Phase::kFinalize,
                     2 * n_ * kept.size() * kept.size() +
                         kept.size() * kept.size() * kept.size());
    meter_.release_dense(2 * n_ * kept.size() + kept.size() * kept.size());
    if (failed == kept.size()) {
      break;  // success
    }
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(failed));
  }

  const std::size_t kp = kept.size();
  CompletionResult out;
  out.delta_hat = delta_hat_;
  out.effective_rank = kp;
  out.quality_warning = warning_ || kp < k;
  out.uhat = DenseMatrix(m_, k);
  out.rhat = DenseMatrix(k, k);
  meter_.add_dense(m_ * k + k * k);

  if (kp > 0) {
    // T = (4/delta) * rhat * rhat^T in the surviving coordinates.
    DenseMatrix t_scaled(kp, kp);
    meter_.add_dense(kp * kp);
    const double scale = 4.0 / delta_hat_;
    for (std::size_t i = 0; i < kp; ++i) {
      for (std::size_t j = 0; j < kp; ++j) {
        double acc = 0.0;
        for (std::size_t b = 0; b < kp; ++b) {
          acc += rhat_small.at(i, b) * rhat_small.at(j, b);
        }
        t_scaled.at(i, j) = scale * acc;
      }
    }
    meter_.add_flops(Phase::kFinalize, kp * kp * kp + kp * kp);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < kp; ++j) {
        double acc = 0.0;
        for (std::size_t b = 0; b < kp; ++b) {
          acc += ihat_.at(i, kept[b]) * t_scaled.at(b, j);
        }
        out.uhat.at(i, kept[j]) = acc;
      }
    }
    meter_.add_flops(Phase::kFinalize, m_ * kp * kp);
    for (std::size_t i = 0; i < kp; ++i) {
      for (std::size_t j = 0; j < kp; ++j) {
        out.rhat.at(kept[i], kept[j]) = rhat_small.at(i, j);
      }
    }
    meter_.release_dense(kp * kp);
  }

  out.resources = meter_.report(m_);
  out.vhat = std::move(vhat_);
  phase_ = Stage::kFinalized;
  return out;
}

DenseMatrix materialize(const CompletionResult& result) {
  if (result.uhat.cols != result.vhat.cols) {
    throw InvalidArgumentError("materialize: factor rank mismatch");
  }
  return clamp(matmul_a_bt(result.uhat, result.vhat), 0.0, 1.0);
}

CompletionResult run_one_pass(ColumnStream& stream, const SmcConfig& config) {
  const StreamHeader& h = stream.header();
  if (config.ell > h.n) {
    throw InsufficientDataError(
        "run_one_pass: stream has " + std::to_string(h.n) +
        " columns, batch needs " + std::to_string(config.ell));
  }
  std::vector<SparseColumn> batch;
  batch.reserve(config.ell);
  for (std::size_t i = 0; i < config.ell; ++i) {
    auto item = stream.next();
    if (!item) {
      throw InsufficientDataError("run_one_pass: stream ended during batch");
    }
    batch.push_back(std::move(item->second));
  }
  SmcState state = SmcState::init_batch(h.m, h.n, batch, config);
  batch.clear();
  while (auto item = stream.next()) {
    state.ingest_column(item->second, item->first);
  }
  return state.finalize();
}

std::size_t suggest_ell(std::size_t k, double delta, std::size_t m) {
  if (k < 1) {
    throw InvalidArgumentError("suggest_ell: k must be >= 1");
  }
  if (!(delta > 0.0) || delta > 1.0) {
    throw InvalidArgumentError("suggest_ell: delta must be in (0, 1]");
  }
  if (m < 2) {
    throw InvalidArgumentError("suggest_ell: m must be >= 2");
  }
  const double ln_m = std::log(static_cast<double>(m));
  const double lower = std::ceil(static_cast<double>(k) / (delta * ln_m));
  const double floor_term = std::ceil(4.0 * static_cast<double>(k) * ln_m);
  return static_cast<std::size_t>(std::max(lower, floor_term));
}

}  // namespace smc
