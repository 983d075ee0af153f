#pragma once

#include <stdexcept>
#include <string>

namespace chshsim {

// Bad user input: malformed values, invalid configuration, too little data.
// The CLI maps this family to exit status 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public InputError {
 public:
  using InputError::InputError;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

class InsufficientData : public InputError {
 public:
  using InputError::InputError;
};

// Failures that come from the model or the numerics rather than the input
// format. The CLI maps this family to exit status 2.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownModel : public ModelError {
 public:
  using ModelError::ModelError;
};

class UnsupportedContext : public ModelError {
 public:
  using ModelError::ModelError;
};

// Raised when an oracle-only model (closed-form correlation, no outcome
// functions, no density) is asked to produce outcomes or samples.
class OracleOnly : public ModelError {
 public:
  using ModelError::ModelError;
};

class QuadratureBudgetExceeded : public ModelError {
 public:
  using ModelError::ModelError;
};

}  // namespace chshsim
