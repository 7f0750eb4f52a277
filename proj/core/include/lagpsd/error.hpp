#pragma once

#include <stdexcept>
#include <string>

namespace lagpsd {

enum class ErrorKind {
  ConvergenceFailure,
  DegenerateMesh,
  MeshQuadMismatch,
  IntegrableSingularity,
  OutOfStrip,
  NonFiniteRHS,
  NoConvergence,
  NonFiniteInput,
  StrayedOutOfStrip,
  SingularCollocation,
  ZeroHeadComponent,
  OutOfHalfPlane,
  HalfPlaneViolation,
  SingularSystem,
  InvalidDelta,
  TailNotNegligible,
  InvalidParameter,
  StepFailure,
  MissingHopf,
  Unsupported,
};

const char* to_string(ErrorKind k);

class NumericError : public std::runtime_error {
 public:
  NumericError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lagpsd
