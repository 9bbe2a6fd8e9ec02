#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaincond::cli {

// Runs one command. Exit codes: 0 success, 1 validation failure,
// 2 I/O or parse error, 3 bad configuration. Errors go to `err` as a
// single machine-readable json line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaincond::cli
