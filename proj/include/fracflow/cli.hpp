#ifndef FRACFLOW_CLI_HPP
#define FRACFLOW_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace fracflow::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_domain = 3;

// Runs one command line (without the program name). Tables go to `out`
// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace fracflow::cli

#endif
