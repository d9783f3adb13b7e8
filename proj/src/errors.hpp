#pragma once

#include <stdexcept>
#include <string>

namespace mixlab {

// Degenerate numeric input (e.g. a zero embedding fed to the cosine loss).
struct DegenerateInputError : std::domain_error {
  using std::domain_error::domain_error;
};

// Inner optimization or training produced a non-finite value.
struct DivergedError : std::runtime_error {
  int step_index;
  DivergedError(const std::string& what, int step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_index(step) {}
};

struct InsufficientDataError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config text could not be parsed or validated.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace mixlab
