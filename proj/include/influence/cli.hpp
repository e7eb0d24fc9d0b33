#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace influence::cli {

enum ExitCode : int {
    kOk = 0,
    kViolation = 1,
    kInputError = 2,
    kBudgetExhausted = 3,
};

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace influence::cli
