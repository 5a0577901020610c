#include "launchopt/error.hpp"

namespace launchopt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVelocity: return "ZeroVelocity";
    case ErrorCode::GimbalLock: return "GimbalLock";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::SingularControl: return "SingularControl";
    case ErrorCode::NearGimbalLock: return "NearGimbalLock";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::DegenerateThrust: return "DegenerateThrust";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace launchopt
