#pragma once

#include <stdexcept>
#include <string>

namespace obliq {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  Parse,
  NotPsd,
  NotContained,
  NoSolution,
  Incompatible,
  Singular,
  RangeMismatch,
  NotInRange,
  NotExtendable,
  WeightMismatch,
  IdentityViolation,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace obliq
