#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evcop {

// Base of every error this library throws. The CLI maps the subclasses onto
// process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: bad dimensions, out-of-range parameters, length
// mismatches.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A data column contains repeated values. Rank estimators assume continuous
// margins, so ties are rejected instead of being broken silently.
class TiesPresent : public Error {
 public:
  explicit TiesPresent(std::size_t column)
      : Error("ties present in column " + std::to_string(column)),
        column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Solver or estimator breakdown (QP failure, nonpositive corrected estimate).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace evcop
