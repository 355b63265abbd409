#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace weftprint::cli {

/// Exit codes: 0 success, 1 usage error, 2 data or validation error.
enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2 };

int run(int argc, char** argv);

/// `args` excludes the program name. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weftprint::cli
