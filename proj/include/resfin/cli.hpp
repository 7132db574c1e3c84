#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace resfin {

// Dispatch one command line (without the program name). Exit status:
// 0 = verified/found, 1 = refuted/none at this context, 2 = error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace resfin
