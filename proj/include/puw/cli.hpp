#pragma once

#include <iosfwd>

namespace puw {

inline constexpr const char* kVersion = "1.0.0";

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_degenerate = 2,
  exit_truncation = 3,
  exit_usage = 64,
};

/// Environment variable naming the directory for relative --output paths.
inline constexpr const char* kOutputDirEnv = "PUW_OUTPUT_DIR";

/// Entry point of the `puw` tool; argv[0] is the program name. Results go to
/// `out` unless --output / --output-dir redirect them to a file; diagnostics
/// and usage text go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace puw
