#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eqqcsp::cli {

enum ExitCode : int {
  kTrue = 0,    // TRUE, definable, accept
  kFalse = 1,   // FALSE, not definable, reject
  kUsage = 2,   // usage or format error
  kBudget = 3,  // resource budget exhausted
};

/// Runs one command. `args` excludes the program name. The first line
/// written to `out` is "RESULT ...", except for generator verbs writing the
/// generated file to standard output.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eqqcsp::cli
