#pragma once

#include <ostream>

namespace krtool {

bool run_selftest(bool full, int threads, std::ostream& out);

}  // namespace krtool
