#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace entcum::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kVerifyFailed = 2, kInternal = 3 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entcum::cli
