#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spillover::cli {

/// Exit codes of the command line tool.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;  ///< assumption violation, solver failure, failed verification
inline constexpr int kUsage = 2;   ///< bad flags, unreadable or malformed config

/// Runs one command. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spillover::cli
