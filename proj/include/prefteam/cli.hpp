#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prefteam {

/// Runs one CLI invocation (argv without the program name).
///
/// Exit codes: 0 = query answered (the boolean outcome is in the report),
/// 1 = verification FAILURE (a theorem-consistency check failed),
/// 2 = usage or input error.
///
/// Identical argv + input files produce byte-identical output; --json
/// switches every command to a stable machine-readable schema.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prefteam
