// Copyright 2026 The mecplace Authors.
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

#ifndef MECPLACE_ERRORS_HPP
#define MECPLACE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mecplace {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A failure model or instance breaks one of its invariants.
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

// An argument lies outside the domain of the operation (e.g. a probability
// outside (0,1)).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// Raised by the simplex solver.
class SolverError : public Error {
 public:
  using Error::Error;
};

class IterationLimitError : public SolverError {
 public:
  using SolverError::SolverError;
};

class NumericalError : public SolverError {
 public:
  using SolverError::SolverError;
};

class InfeasibleProgramError : public SolverError {
 public:
  using SolverError::SolverError;
};

class UnboundedProgramError : public SolverError {
 public:
  using SolverError::SolverError;
};

class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

// Structured-text input that cannot be parsed or does not match its schema.
// `line` and `column` are 1-based; zero means "unknown".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0,
             std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mecplace

#endif  // MECPLACE_ERRORS_HPP
