// Error taxonomy shared across the library. The CLI maps these onto its
// exit codes (config -> 2, divergence -> 3, io -> 4).
#pragma once

#include <stdexcept>
#include <string>

namespace ergodic {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A point fell outside the search region.
struct DomainViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A density (or its coefficients) failed the unit-integral requirement.
struct NormalizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched vector/grid dimensions.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad measurement fed to the estimator.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptation blew up; the message carries the remediation hint.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ergodic
