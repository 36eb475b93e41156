#pragma once

#include <iosfwd>

namespace orbicert {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitInputError = 2,
  kExitIncomplete = 3,
};

/// Parses argv and runs one subcommand. Human-readable output goes to `out`,
/// diagnostics to `err`; artifacts are written to the files named by flags.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace orbicert
