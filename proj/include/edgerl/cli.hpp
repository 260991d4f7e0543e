#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgerl {

/// Entry point of the `edgerl` command-line tool. Returns the process exit
/// status; diagnostics go to `err` as a single line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses seed lists such as "3", "0-9" or "0,2,5-7".
std::vector<unsigned long long> parse_seed_list(const std::string& text);

}  // namespace edgerl
