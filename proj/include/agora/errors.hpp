#pragma once

#include <stdexcept>
#include <string>

namespace agora {

// Rejected input: schema, invariant, configuration or oracle misuse.
// The command-line driver maps this family to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Document does not match the expected structure.
class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Structurally well-formed input that violates a declared invariant.
class InvariantError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Valuation family, builtin name or option that is not supported.
class UnsupportedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Oracle query on a variant that does not implement it.
class WrongOracleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Requested computation exceeds a configured enumeration cap.
// Mapped to exit code 3.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace agora
