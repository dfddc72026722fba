#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ckahler::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kInvariantViolation = 3 };

/// Runs one command. `args` excludes the program name. The report goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ckahler::cli
