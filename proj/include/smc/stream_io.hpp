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

#ifndef SMC_STREAM_IO_HPP_
#define SMC_STREAM_IO_HPP_

#include <fstream>
#include <optional>
#include <string>
#include <utility>

#include "smc/dense_matrix.hpp"
#include "smc/sparse_matrix.hpp"

namespace smc {

// Column-stream text format (UTF-8, LF), version 1:
//   smcs 1
//   <m> <n>
//   per column t = 0..n-1:  "c <t> <nnz>" then nnz lines "<row> <value>",
//   rows strictly increasing, values in [0,1] in shortest round-trip form
//   end
struct StreamHeader {
  std::size_t m = 0;
  std::size_t n = 0;
  int format_version = 1;
};

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

void stream_write(const SparseColMatrix& a, const std::string& path);

// One-pass column reader. Move-only and offering no rewind, so a second
// traversal is impossible by construction: once next() has returned
// nullopt (or thrown), the stream is permanently exhausted.
class ColumnStream {
 public:
  explicit ColumnStream(const std::string& path);
  ColumnStream(ColumnStream&&) = default;
  ColumnStream& operator=(ColumnStream&&) = default;
  ColumnStream(const ColumnStream&) = delete;
  ColumnStream& operator=(const ColumnStream&) = delete;

  const StreamHeader& header() const { return header_; }

  // Yields (t, column) strictly in file order; nullopt after column n-1.
  // Malformed records raise ParseError naming the offending line.
  std::optional<std::pair<std::size_t, SparseColumn>> next();

 private:
  std::string read_line();

  std::ifstream in_;
  StreamHeader header_;
  std::size_t line_no_ = 0;
  std::size_t served_ = 0;
  bool exhausted_ = false;
};

// Reads a whole stream file into a matrix (the full-memory baseline path
// densifies exactly what the one-pass reader would have produced).
SparseColMatrix read_stream_matrix(const std::string& path);

// Dense text format, version 1 (same text conventions as the stream):
//   smcd 1
//   <m> <n> <k>
//   m lines of n space-separated values in [0,1]
//   end
// k records the rank used to produce the matrix (0 when not applicable).
struct DenseFile {
  DenseMatrix matrix;
  std::size_t k = 0;
};

void write_dense(const std::string& path, const DenseMatrix& a,
                 std::size_t k);
DenseFile read_dense(const std::string& path);

// Reads the first line of a file to dispatch on the format tag
// ("smcs", "smcd", "smcf"). Returns the tag or raises ParseError.
std::string peek_format_tag(const std::string& path);

}  // namespace smc

#endif  // SMC_STREAM_IO_HPP_
