#pragma once

#include <string>
#include <vector>

namespace rhw::cli {

/// Entry point of the command-line front end. Returns the process exit code;
/// failures print a machine-readable JSON object on stderr.
int run(const std::vector<std::string>& args);

} // namespace rhw::cli
