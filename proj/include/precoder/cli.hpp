#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace precoder::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,  // unreadable/invalid config or bad flags
  kExitSolve = 2,   // infeasible design or solver failure
};

/// Default output directory when --out is not given.
inline constexpr const char* kOutputDirEnv = "PRECODER_OUTPUT_DIR";

/// Runs the tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace precoder::cli
