#pragma once

#include <iosfwd>

namespace annealot::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kNumerical = 2, kStall = 3 };

// Runs one subcommand. Artifacts go to --output-dir when given, otherwise to out.
// Timing lines go to err only.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace annealot::cli
