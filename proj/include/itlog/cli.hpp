#ifndef ITLOG_CLI_HPP
#define ITLOG_CLI_HPP

#include <string>
#include <vector>

namespace itlog {

// Batch front end.  Returns the process exit code: 0 on success (a one-line
// JSON summary goes to stdout), 2 on flag/config validation failures, 1 on
// runtime (numeric) failures.
int run_cli(const std::vector<std::string>& args); // argv[0] excluded
int run_cli(int argc, const char* const* argv);

} // namespace itlog

#endif
