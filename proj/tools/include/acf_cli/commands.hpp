#pragma once

#include <iosfwd>
#include <vector>
#include <string>

namespace acf::cli {

enum ExitCode : int { kOk = 0, kMissingInput = 1, kInvalidConfig = 2, kFailure = 3 };

/// Entry point of the `acf` tool; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace acf::cli
