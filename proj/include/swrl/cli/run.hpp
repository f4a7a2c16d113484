#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "swrl/cli/config.hpp"

namespace swrl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Result text for one subcommand (CSV or JSON), without touching the disk.
std::string render(const ExperimentConfig& config);

/// Renders, writes the result file and its manifest. Returns the exit code.
int run(const ExperimentConfig& config, std::ostream& log);

/// Full command-line entry point: parse, run, map errors to exit codes.
int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& log);

}  // namespace swrl::cli
