#pragma once

#include <stdexcept>
#include <string>

namespace qfactory {

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidArgument,
  kNormViolation,
  kInvalidParams,
  kSizeLimit,
  kParse,
  kProtocol,
};

const char* error_code_name(ErrorCode code);

// Structured error raised for contract violations (bad dimensions, inputs
// outside the function domain, malformed files). Expected protocol outcomes
// such as a missing second preimage are values, not errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qfactory
