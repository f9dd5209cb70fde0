#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace taucert {

/// The command-line front end: `thickness`, `certify`, `verify`, `plot`,
/// `selftest`.  Returns the process exit code; failure classes map to the
/// stable codes of ErrorCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace taucert
