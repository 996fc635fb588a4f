#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fgg {

// Entry point of the fggc tool. Returns the process exit code:
// 0 success, 1 diagnostics or mismatch, 2 usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fgg
