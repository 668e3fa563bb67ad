#pragma once

#include <stdexcept>
#include <string>

namespace cmtomo {

/// Invalid user input: a spec, frame or config value that violates its invariants.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that cannot meet its accuracy contract (non-convergence,
/// grid overflow, calibration failure, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cmtomo
