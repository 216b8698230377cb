#pragma once

#include <stdexcept>
#include <string>

namespace lbs {

// Contract violation: incompatible shapes or malformed arguments.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bad experiment configuration (unknown key, invalid value, degenerate range).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite value detected during training or evaluation.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dataset or checkpoint file could not be read.
struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lbs
