#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace measures::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kMeasureFailure = 2,
};

// Runs the command line `args` (args[0] is the program name). Results go to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace measures::cli
