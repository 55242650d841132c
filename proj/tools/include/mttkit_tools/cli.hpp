#pragma once

#include <iosfwd>

namespace mttkit::cli {

/// Exit codes of the `mttkit` tool.
enum ExitCode : int {
  kYes = 0,
  kNo = 1,
  kUnknown = 2,
  kError = 3,  // library error: parse, validation, engine mismatch, budget
  kUsage = 4,  // bad command line or unreadable file
};

/// Runs one command. `argv[0]` is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mttkit::cli
