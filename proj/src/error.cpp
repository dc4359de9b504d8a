#include "nlgeo/error.hpp"

namespace nlgeo {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonPhysical: return "NonPhysical";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::ArgumentError: return "ArgumentError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace nlgeo
