#pragma once

#include <stdexcept>
#include <string>

namespace tvl {

/// Base for every failure raised by the library; std::invalid_argument is
/// used separately for precondition violations on plain arguments.
class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A term with Re(rate) >= 0 survives in a half-line integral.
class NonDecaying : public SpectralError {
 public:
  using SpectralError::SpectralError;
};

/// Negative powers of r do not cancel in an integral from zero.
class DivergentAtZero : public SpectralError {
 public:
  using SpectralError::SpectralError;
};

/// Boundary values requested from a function with a surviving pole at r = 0.
class PoleAtZero : public SpectralError {
 public:
  using SpectralError::SpectralError;
};

/// Spectral parameter z sits on a resonance of the resolvent construction.
class DegenerateZ : public SpectralError {
 public:
  using SpectralError::SpectralError;
};

class MaxPanelsExceeded : public SpectralError {
 public:
  using SpectralError::SpectralError;
};

/// Input lies outside the domain an operation requires.
class DomainViolation : public SpectralError {
 public:
  using SpectralError::SpectralError;
};

class ConvergenceFailure : public SpectralError {
 public:
  using SpectralError::SpectralError;
};

}  // namespace tvl
