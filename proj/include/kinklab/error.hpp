#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kinklab {

// Every failure mode a kinklab operation can report. The enumerator names are
// what the CLI prints on standard error.
enum class ErrorCode {
  NonPositiveStep,
  PotentialVanishesInside,
  InvalidPotential,
  TailNotReached,
  TailUnderflow,
  QuadratureDisagreement,
  GridTooNarrow,
  NegativeEigenvalue,
  NoSeed,
  CflViolation,
  BoundaryContamination,
  BlowupDetected,
  NoConvergence,
  GapCollapse,
  SingularSystem,
  TrackingLost,
  NonPositiveTime,
  StepUnderflow,
  NonPositive,
  NegativeDeficit,
  BoxExhausted,
  InvalidArgument,
  ConfigError,
  IoError,
};

std::string_view error_name(ErrorCode code);

class KinkError : public std::runtime_error {
 public:
  KinkError(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kinklab
