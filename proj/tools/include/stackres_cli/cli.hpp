#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stackres::cli {

enum ExitStatus : int {
  kOk = 0,
  kNotResilient = 1,  // resilience, commerce and fuzz only
  kUsage = 2,
  kInvalidInput = 3,
  kInconclusive = 4,
};

// Runs one command line (without the program name). Results go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stackres::cli
