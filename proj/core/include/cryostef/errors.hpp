#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cryostef {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent user input (configuration, schedules, option values).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Hysteresis envelope calibration hit a vanishing denominator.
class DegenerateCalibration : public Error {
 public:
  using Error::Error;
};

/// A state violates the constraint interval it is required to satisfy.
class InfeasibleState : public Error {
 public:
  using Error::Error;
};

/// Constraint bounds with lo > hi, or a negative play width.
class InvalidBounds : public Error {
 public:
  using Error::Error;
};

/// Lipschitz probe called with coincident states or a zero direction.
class DegenerateProbe : public Error {
 public:
  using Error::Error;
};

/// Tridiagonal factorization met a non-positive or non-finite pivot.
class SingularJacobian : public Error {
 public:
  using Error::Error;
};

/// Nonlinear iteration exhausted its budget.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double last_residual, std::size_t step = 0)
      : Error(what), last_residual_(last_residual), step_(step) {}

  double last_residual() const noexcept { return last_residual_; }
  /// Time-step index (1-based) when raised from the time loop, 0 otherwise.
  std::size_t step() const noexcept { return step_; }

 private:
  double last_residual_;
  std::size_t step_;
};

/// Fixed-point iterate left the a-priori bound; a special case of non-convergence.
class Divergence : public NonConvergence {
 public:
  using NonConvergence::NonConvergence;
};

}  // namespace cryostef
