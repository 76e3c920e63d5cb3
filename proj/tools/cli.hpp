#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gradtomo::cli {

/// Runs the gradtomo command line. args excludes the program name.
/// Returns the process exit code; outputs written by a failing command are removed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gradtomo::cli
