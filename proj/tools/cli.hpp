#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace farkas::cli {

/// Exit codes shared by every subcommand.
enum Exit : int {
  kOk = 0,        // success; for decide: every instance certified in K
  kNegative = 1,  // negative result: separation, rejected certificate, failed check
  kError = 2,     // bad input, parse failure, solver error
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --output is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace farkas::cli
