#ifndef IMOG_CLI_HPP
#define IMOG_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace imog::cli {

enum ExitCode { kOk = 0, kErrors = 1, kUsage = 2, kIo = 3 };

/// Runs one command line (without the program name). Everything printed goes
/// to `out` / `err`. IMOG_CAP, when set, replaces the default block cap.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imog::cli

#endif  // IMOG_CLI_HPP
