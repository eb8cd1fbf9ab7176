#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rtc::cli {

enum ExitCode : int {
    ok = 0,
    invalid_args = 2,
    io_error = 3,
    failure = 4,
};

/// Runs one command line (without the program name) and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rtc::cli
