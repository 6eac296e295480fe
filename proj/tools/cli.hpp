#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace deeplda::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericalError = 3 };

/// Runs the command line `args` (args[0] is the program name), writing
/// normal output to `out` and diagnostics to `err`. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "2143233" -> "2,143,233".
std::string group_thousands(std::size_t value);

}  // namespace deeplda::cli
