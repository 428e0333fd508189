#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace multibid {

/// Entry point of the `multibid` tool. Returns 0 on success, 2 on usage or
/// configuration errors, 1 on runtime failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace multibid
