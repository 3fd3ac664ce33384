#pragma once

#include <iosfwd>

namespace jaguar {

// Runs the `jaguar` command line. Exit codes: 0 success, 1 usage error,
// 2 invalid input, 3 internal invariant violation.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jaguar
