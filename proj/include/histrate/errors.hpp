#pragma once

#include <stdexcept>
#include <string>

namespace histrate {

/// Caller-supplied parameters, files, or configuration violate a precondition.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not be completed (capacity, estimation, resources).
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace histrate
