#pragma once

#include <stdexcept>
#include <string>

namespace nlfe {

/// Base class for failures of the numerical pipeline (as opposed to bad
/// user input, which raises ConfigError in the CLI layer).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of subdivisions before meeting tolerance.
class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& what, double value, double error_estimate)
      : NumericError(what), value_(value), error_estimate_(error_estimate) {}
  double value() const { return value_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double value_;
  double error_estimate_;
};

/// Interface with k_za + k_zb = 0.
class DegenerateInterfaceError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Expansion denominator or point-dipole resonance hit exactly.
class PoleError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A coincident-point Green's function trace was requested inside an
/// absorbing medium without regularization.
class DivergentError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace nlfe
