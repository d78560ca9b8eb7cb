#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fsc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kVerificationFailed = 2, kCapExceeded = 3 };

/// Runs the command line (args[0] is the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fsc::cli
