#ifndef AADMM_ERRORS_HPP
#define AADMM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aadmm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand sizes do not agree.
class DimensionError : public Error {
 public:
  DimensionError(const std::string& what, long expected, long actual)
      : Error(what + ": expected dimension " + std::to_string(expected) +
              ", got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  long expected() const { return expected_; }
  long actual() const { return actual_; }

 private:
  long expected_;
  long actual_;
};

/// A numeric parameter violates an admissibility bound.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The requested combination is not implemented (and deliberately so).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// An inner iterative routine hit its cap. Carries the last estimate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_estimate)
      : Error(what), last_estimate_(last_estimate) {}

  double last_estimate() const { return last_estimate_; }

 private:
  double last_estimate_;
};

}  // namespace aadmm

#endif  // AADMM_ERRORS_HPP
