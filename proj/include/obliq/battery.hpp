#pragma once

// Invariant battery for one pair (A, S): every structural identity the
// library relies on, evaluated numerically with seeded random probes.

#include <cstdint>
#include <string>
#include <vector>

#include "obliq/kernel.hpp"

namespace obliq {

struct Check {
  std::string name;
  bool passed = false;
  bool skipped = false;
  double value = 0.0;  ///< measured error, count, or 0 for boolean checks
  double bound = 0.0;
};

std::vector<Check> run_battery(const PsdOperator& a, const Subspace& s,
                               const Tolerance& tol, std::uint64_t seed);

}  // namespace obliq
