#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hhs {

enum class ErrorCode {
  InvalidEdge,
  InvalidVertex,
  DisconnectedGraph,
  SizeLimitExceeded,
  EmptyTarget,
  RelationConflict,
  MissingRho,
  DanglingReference,
  UnknownDomain,
  GeodesicCapExceeded,
  CombinatorialBlowup,
  DegeneratePairs,
  ConfigValidation,
  ValidationFirst,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidEdge: return "InvalidEdge";
    case ErrorCode::InvalidVertex: return "InvalidVertex";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorCode::EmptyTarget: return "EmptyTarget";
    case ErrorCode::RelationConflict: return "RelationConflict";
    case ErrorCode::MissingRho: return "MissingRho";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::UnknownDomain: return "UnknownDomain";
    case ErrorCode::GeodesicCapExceeded: return "GeodesicCapExceeded";
    case ErrorCode::CombinatorialBlowup: return "CombinatorialBlowup";
    case ErrorCode::DegeneratePairs: return "DegeneratePairs";
    case ErrorCode::ConfigValidation: return "ConfigValidation";
    case ErrorCode::ValidationFirst: return "ValidationFirst";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hhs
