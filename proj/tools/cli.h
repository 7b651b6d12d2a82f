#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vocra::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;

/// Entry point shared by the `vocra` executable and the tests.
///
/// args[0] is the program name. Normal output goes to `out`; summaries,
/// diagnostics and machine-readable errors go to `err`. Returns the exit
/// code instead of terminating.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace vocra::cli
