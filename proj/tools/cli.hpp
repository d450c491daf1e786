#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace csar::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kIoFormat = 3,
    kValidation = 4,
};

/// Runs one command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace csar::cli
