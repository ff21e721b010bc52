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

#ifndef SMC_SPARSE_MATRIX_HPP_
#define SMC_SPARSE_MATRIX_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "smc/dense_matrix.hpp"
#include "smc/errors.hpp"

namespace smc {

// One observed entry. Presence of an entry IS the observation mask: an entry
// whose value is 0.0 is still observed. Values lie in [0,1].
struct SparseEntry {
  std::uint32_t row;
  double value;
};

// Entries sorted by row index, no duplicates.
struct SparseColumn {
  std::vector<SparseEntry> entries;

  std::size_t nnz() const { return entries.size(); }
};

// Column-major sparse matrix over an explicit observation mask.
struct SparseColMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<SparseColumn> columns;

  SparseColMatrix() = default;
  SparseColMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), columns(c) {}

  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& c : columns) n += c.entries.size();
    return n;
  }

  // Appends an entry; rows within a column must arrive strictly increasing.
  void add_entry(std::size_t col, std::uint32_t row, double value) {
    if (col >= cols || row >= rows)
      throw InvalidArgumentError("add_entry: index out of range");
    auto& e = columns[col].entries;
    if (!e.empty() && e.back().row >= row)
      throw InvalidArgumentError("add_entry: rows must be strictly increasing");
    e.push_back({row, value});
  }

  DenseMatrix densify() const {
    DenseMatrix d(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
      for (const auto& e : columns[j].entries)
        d.at(e.row, j) = e.value;
    return d;
  }
};

}  // namespace smc

#endif  // SMC_SPARSE_MATRIX_HPP_
