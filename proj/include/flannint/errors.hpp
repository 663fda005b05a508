#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flannint {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violation on an argument (bad interval, bad count, ...).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Simpson's rule was asked for an odd number of subintervals.
class ParityError : public InvalidArgumentError {
 public:
  using InvalidArgumentError::InvalidArgumentError;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected, const std::string& found)
      : Error("syntax error at offset " + std::to_string(offset) + ": expected " + expected +
              ", found " + found),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class UnknownIdentifierError : public Error {
 public:
  UnknownIdentifierError(std::string name, std::size_t offset)
      : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
        name_(std::move(name)),
        offset_(offset) {}

  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

/// Evaluation left the real domain (sqrt of a negative, log of a non-positive,
/// division by zero, or any non-finite intermediate).
class DomainError : public Error {
 public:
  DomainError(std::string subexpression, double x, const std::string& reason)
      : Error("domain error in '" + subexpression + "' at x = " + format_x(x) + ": " + reason),
        subexpression_(std::move(subexpression)),
        x_(x) {}

  const std::string& subexpression() const noexcept { return subexpression_; }
  double x() const noexcept { return x_; }

 private:
  static std::string format_x(double x);

  std::string subexpression_;
  double x_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t iteration, double error_value);

  std::size_t iteration() const noexcept { return iteration_; }
  double error_value() const noexcept { return error_value_; }

 private:
  std::size_t iteration_;
  double error_value_;
};

class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

/// A query reached outside the interval the network was trained on.
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature exhausted its evaluation budget.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace flannint
