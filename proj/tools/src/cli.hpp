#pragma once

#include <string>
#include <vector>

namespace lexbias::cli {

/// Exit codes: 0 success, 1 invalid input or usage error, 2 internal error.
int run(const std::vector<std::string>& args);

}  // namespace lexbias::cli
