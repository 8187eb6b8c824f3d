#include "mmlab/errors.hpp"

namespace mmlab {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonPositiveMeasure: return "NonPositiveMeasure";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NegativeRadius: return "NegativeRadius";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::NoValidKappa: return "NoValidKappa";
    case ErrorCode::KappaTooSmall: return "KappaTooSmall";
    case ErrorCode::TooFewLevels: return "TooFewLevels";
    case ErrorCode::NoBoundary: return "NoBoundary";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::DegenerateFamily: return "DegenerateFamily";
    case ErrorCode::BadOrder: return "BadOrder";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::EtaTooSmall: return "EtaTooSmall";
    case ErrorCode::NonConvergedSolve: return "NonConvergedSolve";
    case ErrorCode::WindowUnreliable: return "WindowUnreliable";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Precondition: return "Precondition";
  }
  return "Unknown";
}

}  // namespace mmlab
