#ifndef LAMBSCAT_ERRORS_HPP
#define LAMBSCAT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace lambscat {

enum class ErrorCode {
  InvalidModel,
  DuplicateEigenvalue,
  ZeroCoupling,
  DegenerateChain,
  PoleAtZ,
  IllConditioned,
  NoConvergence,
  ImaginaryAxisRoot,
  ScanIncomplete,
  SingularM,
  QuadratureFailure,
  NonFiniteState,
  ConstraintViolation,
  OutOfRange,
  PointSpectrumPresent,
  InsufficientDecay,
  RootInLeftHalfPlane,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::DuplicateEigenvalue: return "DuplicateEigenvalue";
    case ErrorCode::ZeroCoupling: return "ZeroCoupling";
    case ErrorCode::DegenerateChain: return "DegenerateChain";
    case ErrorCode::PoleAtZ: return "PoleAtZ";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ImaginaryAxisRoot: return "ImaginaryAxisRoot";
    case ErrorCode::ScanIncomplete: return "ScanIncomplete";
    case ErrorCode::SingularM: return "SingularM";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::PointSpectrumPresent: return "PointSpectrumPresent";
    case ErrorCode::InsufficientDecay: return "InsufficientDecay";
    case ErrorCode::RootInLeftHalfPlane: return "RootInLeftHalfPlane";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure the library reports carries a machine-readable code; the
/// what() text is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace lambscat

#endif  // LAMBSCAT_ERRORS_HPP
