#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chiplet::cli {

/// Runs one command line (without the program name). Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace chiplet::cli
