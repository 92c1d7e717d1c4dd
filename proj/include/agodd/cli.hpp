#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "agodd/model.hpp"

// Command line front end. run_cli is the whole tool behind a function so
// tests can drive it without spawning processes.
//
// Exit codes: 0 ok/verified, 1 boundary violations, 2 coverage below
// threshold or gaps present, 3 parse or validation error, 4 usage error.

namespace agodd {

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// Text table of an ODD, one row per refinement chain, deepest level of
// detail first so a row reads from the binding boundary back to its
// category. Set-mode symbols mark each attribute.
std::string render_odd_table(const AgOdd& odd);

}  // namespace agodd
