#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hapticbar {

enum class ErrorCode {
  // configuration / input validation
  InvalidArgument,
  UnknownMaterial,
  MissingMass,
  PositionOutOfRange,
  AttachmentNodeMissing,
  NodeOutOfRange,
  UnknownAttachment,
  UnitParse,
  ConfigParse,
  GridMismatch,
  EmptyGroup,
  NoSamplesAtPosition,
  // numerical failures
  SingularMass,
  EigenNoConvergence,
  ResonanceSingular,
  EigenbasisSingular,
  FactorizationFailure,
};

std::string_view to_string(ErrorCode code);

/// True for failures of the numerical solvers, as opposed to bad input.
bool is_solver_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hapticbar
