#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pidtf::cli {

/// Executes one CLI invocation. `args` excludes the program name.
/// Returns 0 on success, 1 on a usage error (synopsis goes to `err`),
/// 2 on a runtime error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pidtf::cli
