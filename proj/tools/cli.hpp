#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace meanstream::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,
  kDomainError = 3,
  kEmptyInput = 4,
  kFamilyMismatch = 5,
};

/// Runs one command line (without the program name) and returns the exit status.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace meanstream::cli
