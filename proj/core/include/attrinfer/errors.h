#pragma once

#include <stdexcept>
#include <string>

namespace attrinfer {

// Malformed or inconsistent user input (files, flags, object models).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An atom does not type-check against the schema.
class TypeError : public InputError {
 public:
  using InputError::InputError;
};

// Invalid algorithm parameters (weights, thresholds, NTCF gates).
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

// A caller broke a documented precondition. Indicates a bug, not bad input.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An internal invariant failed to hold.
class InvariantFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace attrinfer
