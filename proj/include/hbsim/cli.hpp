#pragma once

#include <string>
#include <vector>

namespace hbsim {

/// Command-line entry point (main() minus the argv plumbing, so tests can
/// drive it in-process). args excludes the program name.
///
/// Exit codes: 0 success (including --help), 1 invalid input rejected
/// before any work product exists (bad flags, config, schema, unknown
/// device), 2 failure while doing the work.
int run_cli(const std::vector<std::string>& args);

} // namespace hbsim
