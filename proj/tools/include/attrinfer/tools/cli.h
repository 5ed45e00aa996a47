#pragma once

#include <ostream>

namespace attrinfer::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

// Runs the command line tool. Results go to `out` (or to files named by
// flags), diagnostics to `err`. Returns the process exit code: 0 on success,
// including all-NEI predictions, 1 for bad input or configuration, 2 for an
// internal failure.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace attrinfer::tools
