#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pnp::cli {

enum ExitCode : int { kOk = 0, kGoldenMismatch = 2, kBudgetUnknown = 3, kInputError = 4 };

struct RunConfig {
    std::string command;
    std::vector<std::string> args;  // the full command line after the program name
    std::uint64_t seed = 1;
    std::uint64_t budget = 10'000'000;
    std::string cache_path;  // empty: $PNPAIR_FACTOR_CACHE or the shipped cache
    long precision_bits = 200;
    unsigned workers = 1;
};

// Runs one subcommand. Reports go to `out` (or the --out file); errors are JSON objects on `out`.
int run(const std::vector<std::string>& args, std::ostream& out);

} // namespace pnp::cli
