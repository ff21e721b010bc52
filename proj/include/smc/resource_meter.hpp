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

#ifndef SMC_RESOURCE_METER_HPP_
#define SMC_RESOURCE_METER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "smc/errors.hpp"

namespace smc {

// Which stage of the completion pipeline a flop belongs to.
enum class Phase { kBatch, kStream, kFinalize };

// Accounting conventions:
//   - one flop = one multiply-add pair; comparisons and RNG draws are free
//   - memory counts stored real values and sparse (index,value) pairs,
//     one unit each; index width is reported separately in bits so the
//     value-count law can be checked without mixing units
//   - the Gram matrix is stored densely; its sparse-equivalent size (the
//     count of structurally nonzero off-diagonal entries) is recorded so
//     the sparse-storage budget remains checkable
struct ResourceReport {
  std::size_t peak_dense_values = 0;
  std::size_t peak_sparse_entries = 0;
  std::size_t flops_batch = 0;
  std::size_t flops_stream = 0;
  std::size_t flops_finalize = 0;
  std::size_t columns_consumed = 0;
  std::size_t phi_dense_values = 0;
  std::size_t phi_sparse_equivalent = 0;
  std::size_t index_bits_estimate = 0;

  std::size_t total_flops() const {
    return flops_batch + flops_stream + flops_finalize;
  }
  std::size_t peak_stored_values() const {
    return peak_dense_values + peak_sparse_entries;
  }
};

// Live counters with high-water marks. Callers register allocations when
// an artifact is materialized and release them when it is dropped, so the
// "storage returned to zero" invariant is observable mid-run.
class ResourceMeter {
 public:
  void add_dense(std::size_t values) {
    dense_ += values;
    peak_dense_ = std::max(peak_dense_, dense_);
  }
  void release_dense(std::size_t values) {
    if (values > dense_) {
      throw StateError("resource meter: dense release exceeds holdings");
    }
    dense_ -= values;
  }
  void add_sparse(std::size_t entries) {
    sparse_ += entries;
    peak_sparse_ = std::max(peak_sparse_, sparse_);
  }
  void release_sparse(std::size_t entries) {
    if (entries > sparse_) {
      throw StateError("resource meter: sparse release exceeds holdings");
    }
    sparse_ -= entries;
  }
  void add_flops(Phase phase, std::size_t count) {
    switch (phase) {
      case Phase::kBatch:
        flops_batch_ += count;
        break;
      case Phase::kStream:
        flops_stream_ += count;
        break;
      case Phase::kFinalize:
        flops_finalize_ += count;
        break;
    }
  }
  void column_consumed() { ++columns_; }
  void set_phi_stats(std::size_t dense_values, std::size_t sparse_equivalent) {
    phi_dense_ = dense_values;
    phi_sparse_equivalent_ = sparse_equivalent;
  }

  std::size_t current_dense_values() const { return dense_; }
  std::size_t current_sparse_entries() const { return sparse_; }

  // rows is the ambient row count; each sparse index needs ~log2(rows) bits.
  ResourceReport report(std::size_t rows) const {
    ResourceReport r;
    r.peak_dense_values = peak_dense_;
    r.peak_sparse_entries = peak_sparse_;
    r.flops_batch = flops_batch_;
    r.flops_stream = flops_stream_;
    r.flops_finalize = flops_finalize_;
    r.columns_consumed = columns_;
    r.phi_dense_values = phi_dense_;
    r.phi_sparse_equivalent = phi_sparse_equivalent_;
    std::size_t bits = 1;
    while ((std::size_t{1} << bits) < std::max<std::size_t>(rows, 2)) {
      ++bits;
    }
    r.index_bits_estimate = peak_sparse_ * bits;
    return r;
  }

 private:
  std::size_t dense_ = 0;
  std::size_t sparse_ = 0;
  std::size_t peak_dense_ = 0;
  std::size_t peak_sparse_ = 0;
  std::size_t flops_batch_ = 0;
  std::size_t flops_stream_ = 0;
  std::size_t flops_finalize_ = 0;
  std::size_t columns_ = 0;
  std::size_t phi_dense_ = 0;
  std::size_t phi_sparse_equivalent_ = 0;
};

}  // namespace smc

#endif  // SMC_RESOURCE_METER_HPP_
