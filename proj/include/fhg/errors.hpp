#pragma once

#include <stdexcept>
#include <string>

namespace fhg {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration / input validation failures (CLI exit code 1).
struct ConfigError : Error {
  using Error::Error;
};
struct ExponentOutOfRange : ConfigError {
  using ConfigError::ConfigError;
};
struct DuplicateSingularity : ConfigError {
  using ConfigError::ConfigError;
};
struct BadConfig : ConfigError {
  using ConfigError::ConfigError;
};

// Numerical failures (CLI exit code 2).
struct NumericalError : Error {
  using Error::Error;
};
struct SingularEvaluation : NumericalError {
  using NumericalError::NumericalError;
};
struct NoConvergence : NumericalError {
  using NumericalError::NumericalError;
};
struct PrecisionExhausted : NumericalError {
  using NumericalError::NumericalError;
};
struct RealAxisPole : NumericalError {
  using NumericalError::NumericalError;
};
struct DegenerateR : NumericalError {
  using NumericalError::NumericalError;
};
struct DivisionBreakdown : NumericalError {
  using NumericalError::NumericalError;
};
struct StepCollision : NumericalError {
  using NumericalError::NumericalError;
};
struct DegenerateDenominator : NumericalError {
  using NumericalError::NumericalError;
};

// Filesystem failures (CLI exit code 3).
struct IoError : Error {
  using Error::Error;
};

}  // namespace fhg
