#pragma once

#include <iosfwd>

namespace qwjoin::cli {

enum ExitCode : int { kOk = 0, kPrecondition = 2, kInternal = 3 };

/// Subcommands: analyze, join, pst-search, bound-sweep.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qwjoin::cli
