#pragma once

#include <stdexcept>
#include <string>

namespace sqfn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The smoothness index lies outside the range where the characterization
/// theorems hold and no override was requested.
class RangeError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// A quadrature or iterative scheme did not reach its tolerance within budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}

  /// Best relative accuracy reached before giving up.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class FieldIoError : public Error {
 public:
  enum class Kind { Open, Write, BadMagic, DimensionMismatch, TruncatedPayload };

  FieldIoError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace sqfn
