#pragma once

#include <stdexcept>
#include <string>

namespace maninlab {

// Numeric values match the ml_status codes of the C API.
enum class ErrorCode : int {
  Parse = 1,
  NonHomogeneous = 2,
  DegreeTooSmall = 3,
  TooFewVariables = 4,
  ZeroPolynomial = 5,
  DimensionMismatch = 6,
  BadPrime = 7,
  BudgetExceeded = 8,
  PoleAt = 9,
  InsufficientData = 10,
  BoundTooLarge = 11,
  InvalidArgument = 12,
  Io = 13,
  Overflow = 14,
  PrecisionNotReached = 15,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace maninlab
