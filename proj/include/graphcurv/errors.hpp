#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphcurv {

enum class ErrorCode {
  UnknownVertex,
  UnknownArc,
  Disconnected,
  UnknownExample,
  BadParams,
  DuplicateDirection,
  QuadratureNonconverged,
  ApexOnArc,
  ApexOnGraph,
  RadialTangency,
  EndpointIsApex,
  AntipodalPair,
  UnsupportedSpace,
  InvalidGraph,
  Schema,
  Io,
};

constexpr std::string_view codeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownVertex: return "UNKNOWN_VERTEX";
    case ErrorCode::UnknownArc: return "UNKNOWN_ARC";
    case ErrorCode::Disconnected: return "DISCONNECTED";
    case ErrorCode::UnknownExample: return "UNKNOWN_EXAMPLE";
    case ErrorCode::BadParams: return "BAD_PARAMS";
    case ErrorCode::DuplicateDirection: return "DUPLICATE_DIRECTION";
    case ErrorCode::QuadratureNonconverged: return "QUADRATURE_NONCONVERGED";
    case ErrorCode::ApexOnArc: return "APEX_ON_ARC";
    case ErrorCode::ApexOnGraph: return "APEX_ON_GRAPH";
    case ErrorCode::RadialTangency: return "RADIAL_TANGENCY";
    case ErrorCode::EndpointIsApex: return "ENDPOINT_IS_APEX";
    case ErrorCode::AntipodalPair: return "ANTIPODAL_PAIR";
    case ErrorCode::UnsupportedSpace: return "UNSUPPORTED_SPACE";
    case ErrorCode::InvalidGraph: return "INVALID_GRAPH";
    case ErrorCode::Schema: return "SCHEMA";
    case ErrorCode::Io: return "IO";
  }
  return "UNKNOWN";
}

/// Exception carrying a machine-readable code. Every failure raised by the
/// library is an Error; validation problems are reported as data instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(codeName(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace graphcurv
