#pragma once

#include <string>
#include <vector>

namespace wom {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Self-contained correctness checks against the enumeration oracles:
// transform involution, chain-rule equivalence, entropy conservation and the
// total-variation bound. Exact checks cap their block size at 8 regardless
// of max_log2_n.
std::vector<CheckResult> run_validation(unsigned max_log2_n);

}  // namespace wom
