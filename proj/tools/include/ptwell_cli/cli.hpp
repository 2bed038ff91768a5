#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ptwell::cli {

/// Exit codes of the driver.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kBadArguments = 2,
  kIoError = 3,
  kComputeError = 4,
};

/// Runs the driver with argv-style arguments (args[0] is the program name).
/// Tables go to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptwell::cli
