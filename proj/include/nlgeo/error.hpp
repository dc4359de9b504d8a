#pragma once

#include <stdexcept>
#include <string>

namespace nlgeo {

enum class ErrorCode {
  DimensionMismatch,
  NotHermitian,
  NotPSD,
  InvalidProbability,
  OutOfRange,
  NonPhysical,
  NotConverged,
  ArgumentError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nlgeo
