#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qrh/value.hpp"

namespace qrh::cli {

enum ExitCode : int {
  ok = 0,
  failure = 1,     // a suite failed, or a library error outside the cases below
  signalled = 2,   // the value is a pole or zero
  usage = 64,
  bad_complex = 65,
  cant_create = 73,
};

struct CliConfig {
  std::map<std::string, double> tolerances;  // suite → tolerance of its first check
  std::map<std::string, int> truncation;     // "hamiltonian", "tau": Richardson levels
  std::uint64_t seed = 42;
  std::string format = "text";  // json | csv | text
  int digits = 16;
};

// Locale-independent: "a", "bi", "a+bi", "a-bi", "i", "-i" ('j' also accepted), or "a,b".
// Throws std::invalid_argument on anything else.
cplx parse_complex(const std::string& s);

// ';'-separated complex literals; without ';' and without i/j, ','-separated reals.
std::vector<cplx> parse_complex_list(const std::string& s);

std::string format_complex(cplx v, int digits);

// Runs one command line (without the program name). Output goes to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qrh::cli
