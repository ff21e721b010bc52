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

#ifndef SMC_ERRORS_HPP_
#define SMC_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smc {

// Error taxonomy. The CLI maps each branch to a process exit code:
//   InvalidArgumentError (and children) -> 2
//   ParseError                          -> 3
//   NumericalError (and children)       -> 4
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Caller violated the state machine (column after finalization, etc.).
class StateError : public InvalidArgumentError {
 public:
  using InvalidArgumentError::InvalidArgumentError;
};

// Columns presented out of order to the streaming phase.
class SequencingError : public InvalidArgumentError {
 public:
  using InvalidArgumentError::InvalidArgumentError;
};

// Stream ended before the batch could be filled.
class InsufficientDataError : public InvalidArgumentError {
 public:
  using InvalidArgumentError::InvalidArgumentError;
};

// Malformed input file; carries the 1-based line number of the offense.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// QR met a column it could not orthonormalize; carries the column index.
class RankDeficiencyError : public NumericalError {
 public:
  RankDeficiencyError(const std::string& what, std::size_t column)
      : NumericalError(what + " (column " + std::to_string(column) + ")"),
        column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

// Triangular solve met a (near-)zero diagonal; carries the index.
class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(const std::string& what, std::size_t index)
      : NumericalError(what + " (index " + std::to_string(index) + ")"),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class NonConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Input carries no usable signal (e.g. zero observed entries).
class DegenerateInputError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace smc

#endif  // SMC_ERRORS_HPP_
