// Command-line front end. `run` is kept separate from main() so tests can
// drive it with captured streams.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hamlat::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hamlat::cli
