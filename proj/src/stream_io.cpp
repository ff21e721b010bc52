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

#include "smc/stream_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <system_error>
#include <vector>

#include "smc/errors.hpp"

namespace smc {
namespace {

// Splits on single spaces; empty tokens flag malformed spacing so that a
// canonical writer/reader pair stays byte-exact.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t sp = line.find(' ', start);
    if (sp == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, sp - start));
    start = sp + 1;
  }
}

std::size_t parse_size(std::string_view field, std::size_t line_no,
                       const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(std::string("expected ") + what, line_no);
  }
  return static_cast<std::size_t>(v);
}

double parse_double(std::string_view field, std::size_t line_no,
                    const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(std::string("expected ") + what, line_no);
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    throw NumericalError("value not representable as text");
  }
  return std::string(buf, ptr);
}

void stream_write(const SparseColMatrix& a, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidArgumentError("cannot open for writing: " + path);
  }
  out << "smcs 1\n" << a.rows << ' ' << a.cols << '\n';
  for (std::size_t t = 0; t < a.cols; ++t) {
    const SparseColumn& col = a.columns[t];
    out << "c " << t << ' ' << col.entries.size() << '\n';
    for (const SparseEntry& e : col.entries) {
      out << e.row << ' ' << format_double(e.value) << '\n';
    }
  }
  out << "end\n";
  if (!out) {
    throw NumericalError("write failed: " + path);
  }
}

ColumnStream::ColumnStream(const std::string& path)
    : in_(path, std::ios::binary) {
  if (!in_) {
    throw InvalidArgumentError("cannot open stream: " + path);
  }
  std::string magic = read_line();
  if (magic != "smcs 1") {
    throw ParseError("not a column stream (expected \"smcs 1\")", line_no_);
  }
  std::string dims = read_line();
  auto fields = split_fields(dims);
  if (fields.size() != 2) {
    throw ParseError("expected \"<rows> <cols>\"", line_no_);
  }
  header_.m = parse_size(fields[0], line_no_, "row count");
  header_.n = parse_size(fields[1], line_no_, "column count");
  if (header_.m == 0 || header_.n == 0) {
    throw ParseError("dimensions must be positive", line_no_);
  }
}

std::string ColumnStream::read_line() {
  std::string line;
  if (!std::getline(in_, line)) {
    throw ParseError("unexpected end of file", line_no_ + 1);
  }
  ++line_no_;
  return line;
}

std::optional<std::pair<std::size_t, SparseColumn>> ColumnStream::next() {
  if (exhausted_) {
    return std::nullopt;
  }
  std::string head = read_line();
  auto fields = split_fields(head);
  if (fields.size() != 3 || fields[0] != "c") {
    throw ParseError("expected \"c <t> <nnz>\"", line_no_);
  }
  std::size_t t = parse_size(fields[1], line_no_, "column index");
  std::size_t nnz = parse_size(fields[2], line_no_, "entry count");
  if (t != served_) {
    throw ParseError("column index out of sequence", line_no_);
  }
  if (nnz > header_.m) {
    throw ParseError("entry count exceeds row count", line_no_);
  }
  SparseColumn col;
  col.entries.reserve(nnz);
  std::int64_t prev_row = -1;
  for (std::size_t i = 0; i < nnz; ++i) {
    std::string entry = read_line();
    auto ef = split_fields(entry);
    if (ef.size() != 2) {
      throw ParseError("expected \"<row> <value>\"", line_no_);
    }
    std::size_t row = parse_size(ef[0], line_no_, "row index");
    double value = parse_double(ef[1], line_no_, "value");
    if (row >= header_.m) {
      throw ParseError("row index out of range", line_no_);
    }
    if (static_cast<std::int64_t>(row) <= prev_row) {
      throw ParseError("row indices must be strictly increasing", line_no_);
    }
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
      throw ParseError("value outside [0, 1]", line_no_);
    }
    prev_row = static_cast<std::int64_t>(row);
    col.entries.push_back(SparseEntry{static_cast<std::uint32_t>(row), value});
  }
  ++served_;
  if (served_ == header_.n) {
    std::string tail = read_line();
    if (tail != "end") {
      throw ParseError("expected \"end\"", line_no_);
    }
    exhausted_ = true;
  }
  return std::make_pair(t, std::move(col));
}

SparseColMatrix read_stream_matrix(const std::string& path) {
  ColumnStream stream(path);
  SparseColMatrix a(stream.header().m, stream.header().n);
  while (auto item = stream.next()) {
    a.columns[item->first] = std::move(item->second);
  }
  return a;
}

void write_dense(const std::string& path, const DenseMatrix& a,
                 std::size_t k) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidArgumentError("cannot open for writing: " + path);
  }
  out << "smcd 1\n" << a.rows << ' ' << a.cols << ' ' << k << '\n';
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      if (j > 0) out << ' ';
      out << format_double(a.at(i, j));
    }
    out << '\n';
  }
  out << "end\n";
  if (!out) {
    throw NumericalError("write failed: " + path);
  }
}

DenseFile read_dense(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgumentError("cannot open dense file: " + path);
  }
  std::size_t line_no = 0;
  auto next_line = [&in, &line_no]() {
    std::string line;
    if (!std::getline(in, line)) {
      throw ParseError("unexpected end of file", line_no + 1);
    }
    ++line_no;
    return line;
  };

  if (next_line() != "smcd 1") {
    throw ParseError("not a dense matrix file (expected \"smcd 1\")", line_no);
  }
  const std::string dims_line = next_line();  // keep the views' backing alive
  auto dims = split_fields(dims_line);
  if (dims.size() != 3) {
    throw ParseError("expected \"<rows> <cols> <k>\"", line_no);
  }
  std::size_t m = parse_size(dims[0], line_no, "row count");
  std::size_t n = parse_size(dims[1], line_no, "column count");
  std::size_t k = parse_size(dims[2], line_no, "rank");
  if (m == 0 || n == 0) {
    throw ParseError("dimensions must be positive", line_no);
  }
  DenseFile file;
  file.matrix = DenseMatrix(m, n);
  file.k = k;
  for (std::size_t i = 0; i < m; ++i) {
    const std::string row_line = next_line();
    auto fields = split_fields(row_line);
    if (fields.size() != n) {
      throw ParseError("expected " + std::to_string(n) + " values", line_no);
    }
    for (std::size_t j = 0; j < n; ++j) {
      double v = parse_double(fields[j], line_no, "value");
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw ParseError("value outside [0, 1]", line_no);
      }
      file.matrix.at(i, j) = v;
    }
  }
  if (next_line() != "end") {
    throw ParseError("expected \"end\"", line_no);
  }
  return file;
}

std::string peek_format_tag(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgumentError("cannot open: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty file", 1);
  }
  std::size_t sp = line.find(' ');
  return sp == std::string::npos ? line : line.substr(0, sp);
}

}  // namespace smc
