#pragma once

#include <iosfwd>

namespace nlgeo::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitArgument = 2,
  kExitNonPhysical = 3,
  kExitValidation = 4,
  kExitNotConverged = 5,
};

/// Entry point of `nlgeo <command> [options]`. Tables go to `out` unless --out
/// names a file; diagnostics go to `err`. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlgeo::cli
