#pragma once

#include <stdexcept>
#include <string>

namespace usc {

enum class ErrorCode {
  InvalidTruncation,
  Shape,
  Domain,
  OutOfModelRange,
  Pole,
  NotBracketed,
  Precondition,
  Index,
  DegenerateKernel,
  NonStationary,
  InsufficientCutoff,
  UndefinedRatio,
  Parse,
  Validation,
  Usage,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace usc
