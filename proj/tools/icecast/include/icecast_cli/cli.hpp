#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace icecast::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitModel = 3,
};

// Runs one command line (args excludes the program name).  All output goes
// to `out`/`err`; nothing touches std::cout directly, so tests can call this
// in-process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace icecast::cli
