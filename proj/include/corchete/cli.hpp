#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace corchete::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDataError = 3, kNetworkError = 4 };

/// Runs one subcommand. `args` excludes the program name. Errors are
/// reported on `err` as a single `error:<category>:<message>` line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace corchete::cli
