#pragma once

// Batch front end: `hetsim gsim|distinguish|ioco|selftest ...`.
//
// Exit status: 0 property holds / states similar, 1 property fails (a
// counterexample block is printed), 2 usage or input error, 3 caps exceeded.

#include <iosfwd>
#include <string>
#include <vector>

namespace hetsim::cli {

enum ExitStatus : int { ok = 0, fails = 1, usage = 2, intractable = 3 };

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hetsim::cli
