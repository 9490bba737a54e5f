#pragma once

#include <ostream>

namespace sqlaser::cli {

// Analytic-vs-Monte-Carlo certification at a pinned operating point.
// Prints one pass/fail line per check; returns 0 when all pass, 2 otherwise.
int run_selftest(std::ostream& out);

}  // namespace sqlaser::cli
