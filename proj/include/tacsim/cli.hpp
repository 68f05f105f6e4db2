#pragma once

#include <iosfwd>

namespace tacsim {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // unexpected runtime failure
  kExitUsage = 2,    // bad flags, unknown task, missing config file
  kExitConfig = 3,   // malformed config contents
  kExitData = 4,     // malformed input data, replay mismatch
};

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace tacsim
