#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lsweep/layered.hpp"
#include "lsweep/sparsifier.hpp"

namespace lsweep {

struct CheckResult {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool passed = false;
  double seconds = 0;
};

/// Largest |C^l(k, j) - C(k, j)| over the rows of the layer whose 3x3
/// neighbourhood lies inside the layer interior, all columns of the pattern.
double compatibility_error(const LocalSystem& sys, const SparseOperator& c);

/// Small dense and direct cross-checks of the whole pipeline.
std::vector<CheckResult> run_oracle_checks(std::uint64_t seed);

}  // namespace lsweep
