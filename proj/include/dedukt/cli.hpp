#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dedukt::cli {

/// Exit codes: 0 success / true / Sat / Derivable; 1 false / Unsat /
/// NotDerivable; 2 Unknown; 64 usage error; 65 input error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dedukt::cli
