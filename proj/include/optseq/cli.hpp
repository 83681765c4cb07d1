#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optseq {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // verify found a failing criterion, or an unexpected error
  kExitParse = 2,
  kExitResource = 3,
  kExitInconclusive = 4,
};

// Runs one command line (without the program name).  The report goes to
// `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses a comma-separated vector; throws ParseError naming the bad entry.
std::vector<double> parse_vector(const std::string& text);
// One decimal per line; blank lines and `#` comments are skipped.
std::vector<double> read_vector_file(const std::string& path);

}  // namespace optseq
