#pragma once

#include <stdexcept>
#include <string>

namespace cusign {

// Base type for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (bad value, bad range).
struct InvalidArgumentError : Error {
  using Error::Error;
};

// Matrix/vector shapes do not conform.
struct DimensionError : InvalidArgumentError {
  using InvalidArgumentError::InvalidArgumentError;
};

// A matrix required to be positive (semi)definite is not.
struct NotPsdError : Error {
  using Error::Error;
};

// Fixed-point iteration failed to converge within its cap.
struct DivergenceError : Error {
  using Error::Error;
};

// A linear solve hit a (numerically) singular matrix.
struct ConditioningError : Error {
  using Error::Error;
};

// Sign probabilities at 0 or 1 make the absorbing chain degenerate.
struct DegenerateProbabilityError : Error {
  using Error::Error;
};

// Threshold outside the calibrated theta table and no custom theta supplied.
struct UnsupportedThresholdError : Error {
  using Error::Error;
};

// Threshold tuning could not bracket or reach the target alarm rate.
struct TuningFailureError : Error {
  using Error::Error;
};

// Scenario config file could not be parsed; message carries file:line.
struct ConfigError : Error {
  using Error::Error;
};

// Command-line misuse (maps to exit code 2 in the CLI).
struct UsageError : Error {
  using Error::Error;
};

}  // namespace cusign
