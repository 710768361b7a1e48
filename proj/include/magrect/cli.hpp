#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace magrect::cli {

enum ExitStatus : int {
  kOk = 0,
  kUsageError = 2,
  kSolverFailure = 3,
};

/// Parses "start:stop:step" ranges and comma lists, e.g. "0,0.5,1:2:0.5".
/// Ranges include stop when it lies on the step lattice (within 1e-9 step).
[[nodiscard]] std::vector<double> parse_values(const std::string& text);

/// Runs one subcommand. args excludes the program name. Results go to
/// `out` unless --output names a file; errors go to `err` as one JSON line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace magrect::cli
