#pragma once

#include <stdexcept>
#include <string>

namespace tbfact {

// Base for all domain errors raised by the toolkit.
struct TbfactError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Remote judge transport failed after bounded retries.
struct BackendUnreachable : TbfactError {
  using TbfactError::TbfactError;
};

// Judge output not conformant after one corrective reprompt.
struct ParseFailure : TbfactError {
  using TbfactError::TbfactError;
};

struct IoFailure : TbfactError {
  using TbfactError::TbfactError;
};

struct ConfigMismatch : TbfactError {
  using TbfactError::TbfactError;
};

struct LengthMismatch : TbfactError {
  using TbfactError::TbfactError;
};

struct UnknownLabel : TbfactError {
  using TbfactError::TbfactError;
};

struct DuplicatePatientId : TbfactError {
  using TbfactError::TbfactError;
};

// A corpus line failed schema validation; carries the offending line and field.
struct SchemaViolation : TbfactError {
  SchemaViolation(int line_no, std::string field_name, const std::string& what_arg)
      : TbfactError("line " + std::to_string(line_no) + ": field '" + field_name + "': " + what_arg),
        line(line_no),
        field(std::move(field_name)) {}

  int line;
  std::string field;
};

}  // namespace tbfact
