#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xxchain {

enum class ErrorCode {
  InvalidN,
  BadBond,
  NegativeAlpha,
  ZeroCoupling,
  ConvergenceFailure,
  NoBracket,
  TooSmallN,
  NotMonotone,
  WrongConfiguration,
  NotNormalized,
  BadSitePair,
  NotDensityMatrix,
  BadSite,
  NoMinimumInWindow,
  TooLarge,
  BadGrid,
  ParseError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::BadBond: return "BadBond";
    case ErrorCode::NegativeAlpha: return "NegativeAlpha";
    case ErrorCode::ZeroCoupling: return "ZeroCoupling";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::TooSmallN: return "TooSmallN";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::WrongConfiguration: return "WrongConfiguration";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::BadSitePair: return "BadSitePair";
    case ErrorCode::NotDensityMatrix: return "NotDensityMatrix";
    case ErrorCode::BadSite: return "BadSite";
    case ErrorCode::NoMinimumInWindow: return "NoMinimumInWindow";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message is prefixed with the code name so CLI users see it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace xxchain
