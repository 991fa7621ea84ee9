#pragma once

#include <stdexcept>
#include <string>

namespace uam {

enum class ErrorCode {
  InvalidArgument,
  NotUnitary,
  NonConvergence,
  DegenerateNormalization,
  NearSingular,
  DegenerateOmega,
  SingularInput,
  CollisionSingularity,
  TimeSingularity,
  StepCollapse,
  Divergence,
  ConfigInvalid,
  IoError,
  SchemaMismatch,
};

constexpr const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateNormalization: return "DegenerateNormalization";
    case ErrorCode::NearSingular: return "NearSingular";
    case ErrorCode::DegenerateOmega: return "DegenerateOmega";
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::CollisionSingularity: return "CollisionSingularity";
    case ErrorCode::TimeSingularity: return "TimeSingularity";
    case ErrorCode::StepCollapse: return "StepCollapse";
    case ErrorCode::Divergence: return "Divergence";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Numerical failures map to CLI exit code 3; everything else is a usage or IO problem.
  bool is_numerical() const noexcept {
    switch (code_) {
      case ErrorCode::NonConvergence:
      case ErrorCode::DegenerateNormalization:
      case ErrorCode::NearSingular:
      case ErrorCode::DegenerateOmega:
      case ErrorCode::SingularInput:
      case ErrorCode::CollisionSingularity:
      case ErrorCode::TimeSingularity:
      case ErrorCode::StepCollapse:
      case ErrorCode::Divergence:
      case ErrorCode::NotUnitary:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace uam
