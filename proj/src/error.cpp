#include "kinklab/error.hpp"

namespace kinklab {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveStep: return "NonPositiveStep";
    case ErrorCode::PotentialVanishesInside: return "PotentialVanishesInside";
    case ErrorCode::InvalidPotential: return "InvalidPotential";
    case ErrorCode::TailNotReached: return "TailNotReached";
    case ErrorCode::TailUnderflow: return "TailUnderflow";
    case ErrorCode::QuadratureDisagreement: return "QuadratureDisagreement";
    case ErrorCode::GridTooNarrow: return "GridTooNarrow";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::NoSeed: return "NoSeed";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::BoundaryContamination: return "BoundaryContamination";
    case ErrorCode::BlowupDetected: return "BlowupDetected";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::GapCollapse: return "GapCollapse";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::TrackingLost: return "TrackingLost";
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::NegativeDeficit: return "NegativeDeficit";
    case ErrorCode::BoxExhausted: return "BoxExhausted";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace kinklab
