#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dgmd {

enum class ErrorCode {
  InvalidArgument,
  DegenerateDensity,
  IntegrationFailure,
  NonFinite,
  MaxSubdivisions,
  ZeroMean,
  ZeroDenominator,
  InvalidDistribution,
  InvalidModel,
  MissingK,
  AlphaOutOfRange,
  ThetaOutOfRange,
  UOutOfRange,
  OutsideSupport,
  InvalidFamilyId,
  NoRoot,
  InverseFailure,
  MissingContext,
  WindowOutsideInterval,
  Nonconvergence,
  ConfigError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateDensity: return "DegenerateDensity";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::MaxSubdivisions: return "MaxSubdivisions";
    case ErrorCode::ZeroMean: return "ZeroMean";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::MissingK: return "MissingK";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::ThetaOutOfRange: return "ThetaOutOfRange";
    case ErrorCode::UOutOfRange: return "UOutOfRange";
    case ErrorCode::OutsideSupport: return "OutsideSupport";
    case ErrorCode::InvalidFamilyId: return "InvalidFamilyId";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::InverseFailure: return "InverseFailure";
    case ErrorCode::MissingContext: return "MissingContext";
    case ErrorCode::WindowOutsideInterval: return "WindowOutsideInterval";
    case ErrorCode::Nonconvergence: return "Nonconvergence";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dgmd
