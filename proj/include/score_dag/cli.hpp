#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace score_dag::cli {

/// Entry point of the `score_dag` tool. Returns the process exit code:
/// 0 success, 1 usage/config error, 2 data error, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace score_dag::cli
