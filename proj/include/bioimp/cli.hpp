#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bioimp::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kNumericalError = 3 };

/// Runs one command line (args excludes the program name). Regular output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bioimp::cli
