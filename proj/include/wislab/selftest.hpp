#pragma once

#include <ostream>

namespace wislab {

/// Runs fast built-in consistency checks over the whole pipeline, printing
/// one [ok]/[fail] line per check. Returns the number of failed checks.
int run_selftest(std::ostream& out);

}  // namespace wislab
