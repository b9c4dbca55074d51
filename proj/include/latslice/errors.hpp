#pragma once

#include <stdexcept>
#include <string>

namespace latslice {

/// Bad parameters or a malformed run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unreadable, unwritable or unparsable files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An identity or bound that must hold by construction did not.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace latslice
