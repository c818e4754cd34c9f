#ifndef PCIP_ERROR_HPP
#define PCIP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pcip {

enum class ErrorCode {
  InvalidConfig,
  NonPositiveDefinite,
  StabilityViolation,
  NonFiniteField,
  GridMismatch,
  InvalidInitialCondition,
  SingularSystem,
  CalibrationFailed,
  MissingArtifact,
  Io,
};

// All library failures surface as Error; the message names the violated
// precondition or the failing input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pcip

#endif
