#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cmv::cli {

/// Runs the command line; returns 0 on success, 1 on computation errors and
/// 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cmv::cli
