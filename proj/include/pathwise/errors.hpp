#pragma once

#include <stdexcept>
#include <string>

namespace pathwise {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point or field does not have the dimension the caller expects.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A field was asked for more nested derivatives than its tower supports.
class DepthExhausted : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain where a model is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The system has a control-dependent diffusion (m != 0), which the
/// normal-form and controller machinery does not handle.
class UnsupportedSystem : public Error {
 public:
  using Error::Error;
};

/// The white noise would have to be differentiated: the noise coefficient
/// of the order-`order` stochastic Lie derivative does not vanish.
class NoiseDecouplingViolation : public Error {
 public:
  NoiseDecouplingViolation(int order, double magnitude);

  int order() const { return order_; }
  double magnitude() const { return magnitude_; }

 private:
  int order_;
  double magnitude_;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

/// Newton iteration for the inverse coordinate map did not converge.
class NewtonFailure : public Error {
 public:
  NewtonFailure(double residual, int iterations);

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// |b(z)| fell below the admissibility threshold of a linearising control.
class SingularControl : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pathwise
