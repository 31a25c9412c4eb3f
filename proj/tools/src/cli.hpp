#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace msc {

/// Exit statuses: 0 success, 1 runtime or container error, 2 usage error.
/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace msc
