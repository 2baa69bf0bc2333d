#pragma once

#include <stdexcept>
#include <string>

namespace mtev {

/// Base class for failures of a numerical routine on valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfRange : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A physical Mie transmission system is numerically singular for this mode.
class NearSingularMode : public NumericalError {
 public:
  NearSingularMode(int n, const std::string& what) : NumericalError(what), order_(n) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

/// The auxiliary 5x5 modal system is numerically singular at (n, eta).
class SingularModalSystem : public NumericalError {
 public:
  SingularModalSystem(int n, double eta_re, double eta_im, const std::string& what)
      : NumericalError(what), order_(n), eta_re_(eta_re), eta_im_(eta_im) {}
  int order() const noexcept { return order_; }
  double eta_real() const noexcept { return eta_re_; }
  double eta_imag() const noexcept { return eta_im_; }

 private:
  int order_;
  double eta_re_;
  double eta_im_;
};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed scenario files, unknown keys, invalid parameter values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mtev
