#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcl::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitProvable = 0;
inline constexpr int kExitRefutable = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitUsage = 64;

// Runs one command line (args excludes the program name) and returns the
// exit status.  Reports go to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcl::cli
