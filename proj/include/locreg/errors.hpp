#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace locreg {

// Invalid experiment / grid / process configuration.
class config_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A regularization width that is not an integer multiple of the grid step,
// or a width/lag used against the wrong grid.
class alignment_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class io_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Simulation produced a non-finite value; carries the offending step index.
class numeric_error : public std::runtime_error {
public:
  numeric_error(const std::string& what, std::int64_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::int64_t step() const { return step_; }

private:
  std::int64_t step_;
};

}  // namespace locreg
