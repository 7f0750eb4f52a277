#include "lagpsd/error.hpp"

namespace lagpsd {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DegenerateMesh: return "DegenerateMesh";
    case ErrorKind::MeshQuadMismatch: return "MeshQuadMismatch";
    case ErrorKind::IntegrableSingularity: return "IntegrableSingularity";
    case ErrorKind::OutOfStrip: return "OutOfStrip";
    case ErrorKind::NonFiniteRHS: return "NonFiniteRHS";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::StrayedOutOfStrip: return "StrayedOutOfStrip";
    case ErrorKind::SingularCollocation: return "SingularCollocation";
    case ErrorKind::ZeroHeadComponent: return "ZeroHeadComponent";
    case ErrorKind::OutOfHalfPlane: return "OutOfHalfPlane";
    case ErrorKind::HalfPlaneViolation: return "HalfPlaneViolation";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::InvalidDelta: return "InvalidDelta";
    case ErrorKind::TailNotNegligible: return "TailNotNegligible";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::MissingHopf: return "MissingHopf";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace lagpsd
