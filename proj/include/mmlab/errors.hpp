#pragma once

#include <stdexcept>
#include <string>

namespace mmlab {

enum class ErrorCode {
  NonPositiveMeasure,
  NonPositiveLength,
  Disconnected,
  NegativeRadius,
  BadDimension,
  SingularPoint,
  WindowTooSmall,
  BadExponent,
  NoValidKappa,
  KappaTooSmall,
  TooFewLevels,
  NoBoundary,
  EmptyFamily,
  DegenerateFamily,
  BadOrder,
  ExponentOutOfRange,
  EtaTooSmall,
  NonConvergedSolve,
  WindowUnreliable,
  ConfigError,
  Precondition,
};

const char* error_code_name(ErrorCode c);

// Exception carrying a machine-readable code plus, where it makes sense,
// the first offending element (vertex index, edge endpoint, config line).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long detail = -1)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  long detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  long detail_;
};

}  // namespace mmlab
