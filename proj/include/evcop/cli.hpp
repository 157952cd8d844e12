#pragma once

#include <iosfwd>

namespace evcop::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kIoError = 3,
  kNumericalError = 4,
};

// Entry point of the `evcop` tool: subcommands simulate, estimate, project
// and mise. Results go to `out` (or to --output), errors to `err` as one JSON
// object per failure. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace evcop::cli
