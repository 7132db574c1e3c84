#pragma once

#include <iosfwd>

namespace resfin {

// Runs every acceptance criterion, printing one pass/fail line per criterion.
// Returns the number of failures.
int run_acceptance(std::ostream& out);

}  // namespace resfin
