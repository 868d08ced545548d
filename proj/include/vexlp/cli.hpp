#pragma once

// vexlp <subcommand> --config PATH [--out PATH] [--seed N]
// Exit codes: 0 success, 2 config/usage error, 3 numerical failure.

#include <iosfwd>
#include <string>
#include <vector>

#include "vexlp/config.hpp"
#include "vexlp/report.hpp"

namespace vexlp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

const std::vector<std::string>& subcommands();

/// Runs one subcommand on a parsed config. Throws ConfigError for invalid
/// parameters and Error for numerical failures.
ExperimentReport execute(const std::string& command, const RunConfig& config);

/// args excludes the program name. CSV goes to `out` unless --out is given;
/// diagnostics go to `err`. Nothing is written on failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vexlp::cli
