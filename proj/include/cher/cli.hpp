#pragma once

// Command-line entry point. Subcommands: roots, factors, retrieve, measure,
// chi, st0, oracle, pipeline. Exit codes: 0 success, 1 invalid input,
// 2 numerical failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace cher::cli {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "CHER_OUTPUT_DIR";

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cher::cli
