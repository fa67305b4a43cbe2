#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace distill::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Entry point shared by the `distill` binary and the integration tests.
// args[0] is the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace distill::cli
