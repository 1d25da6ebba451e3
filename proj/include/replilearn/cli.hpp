#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace replilearn {

// Exit codes of the experiment runner.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitConfig = 2, kExitSelftestFailed = 3 };

// args excludes the program name. CSV goes to `out` unless --out is given;
// usage, notes and check lines go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace replilearn
