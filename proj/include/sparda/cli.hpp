#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sparda::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 invalid usage or configuration.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace sparda::cli
