#include "hapticbar/error.hpp"

namespace hapticbar {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::UnknownMaterial: return "unknown-material";
    case ErrorCode::MissingMass: return "missing-mass";
    case ErrorCode::PositionOutOfRange: return "position-out-of-range";
    case ErrorCode::AttachmentNodeMissing: return "attachment-node-missing";
    case ErrorCode::NodeOutOfRange: return "node-out-of-range";
    case ErrorCode::UnknownAttachment: return "unknown-attachment";
    case ErrorCode::UnitParse: return "unit-parse";
    case ErrorCode::ConfigParse: return "config-parse";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::EmptyGroup: return "empty-group";
    case ErrorCode::NoSamplesAtPosition: return "no-samples-at-position";
    case ErrorCode::SingularMass: return "singular-mass";
    case ErrorCode::EigenNoConvergence: return "eigen-no-convergence";
    case ErrorCode::ResonanceSingular: return "resonance-singular";
    case ErrorCode::EigenbasisSingular: return "eigenbasis-singular";
    case ErrorCode::FactorizationFailure: return "factorization-failure";
  }
  return "unknown-error";
}

bool is_solver_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMass:
    case ErrorCode::EigenNoConvergence:
    case ErrorCode::ResonanceSingular:
    case ErrorCode::EigenbasisSingular:
    case ErrorCode::FactorizationFailure:
      return true;
    default:
      return false;
  }
}

}  // namespace hapticbar
