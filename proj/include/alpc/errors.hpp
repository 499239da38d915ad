#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alpc {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible matrix dimensions; the message reports the offending shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Invalid scalar arguments (counts, lengths, out-of-range values).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A dataset or hyperparameter invariant does not hold. `name()` identifies
// the violated invariant so callers can react to a specific failure.
class ValidationError : public Error {
 public:
  ValidationError(std::string name, const std::string& what)
      : Error(name + ": " + what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// On-disk format problems: missing files, wrong sizes, parse failures.
class DataError : public Error {
 public:
  using Error::Error;
};

// Numerical breakdown: failed factorization, iteration limit reached.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// The Cholesky factorization met a non-positive pivot.
class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(std::size_t pivot_index, const std::string& what)
      : NumericalError(what), pivot_(pivot_index) {}
  std::size_t pivot_index() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

// A block update failed mid-fit; carries the objective values recorded up
// to the failing iteration.
class FitError : public NumericalError {
 public:
  FitError(const std::string& what, std::vector<double> partial_trace)
      : NumericalError(what), partial_trace_(std::move(partial_trace)) {}
  const std::vector<double>& partial_trace() const noexcept { return partial_trace_; }

 private:
  std::vector<double> partial_trace_;
};

}  // namespace alpc
