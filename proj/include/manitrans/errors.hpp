#pragma once

#include <stdexcept>
#include <string>

namespace manitrans {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of the arguments do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument violates a precondition (non-finite entries, not tangent,
/// not orthonormal, bad metric parameter, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A floating point computation produced non-finite values.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, int taylor_order = 0, int scaling = 0)
      : Error(what), taylor_order_(taylor_order), scaling_(scaling) {}

  int taylor_order() const noexcept { return taylor_order_; }
  int scaling() const noexcept { return scaling_; }

 private:
  int taylor_order_;
  int scaling_;
};

/// The requested exhaustive computation exceeds the configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Gram matrix of a subspace basis is singular under the requested form.
class DegenerateSubspaceError : public Error {
 public:
  using Error::Error;
};

/// A group element could not be used in a linear solve.
class LinearSolveError : public Error {
 public:
  using Error::Error;
};

/// The adaptive integrator could not reach the requested time.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_good_t)
      : Error(what), last_good_t_(last_good_t) {}

  double last_good_t() const noexcept { return last_good_t_; }

 private:
  double last_good_t_;
};

/// Invalid benchmark/CLI configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace manitrans
