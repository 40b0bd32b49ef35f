#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "quadgap/io.hpp"

namespace quadgap::cli {

enum ExitCode : int { kSuccess = 0, kDomainFailure = 1, kUsage = 2 };

/// Runs one invocation. `args` excludes the program name. Primary output goes
/// to `out` (or --out FILE), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Copy of a JSON value with every "approx" member removed, recursively.
io::Json strip_approx(const io::Json& j);
/// "sha256:<hex>" over the compact dump of strip_approx(j).
std::string output_digest(const io::Json& j);

}  // namespace quadgap::cli
