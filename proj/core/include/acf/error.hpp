#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace acf {

enum class ErrorCode {
  InvalidArgument,
  ZeroVector,
  RoiOutOfImage,
  NonPositiveDepth,
  EmptyMask,
  NoValidSeeds,
  DegenerateAxis,
  DegenerateDirection,
  DegenerateFrame,
  RansacFailure,
  PreconditionViolation,
  DivisionByZero,
  InvalidSpec,
  SchemaViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (notably the CLI failure ledger) can dispatch on it.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace acf
