#pragma once

#include <random>

#include "lsweep/grid.hpp"

namespace lsweep::testing {

inline Field random_field(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  Field f(static_cast<Eigen::Index>(n));
  for (auto& v : f) v = cplx(d(rng), d(rng));
  return f;
}

inline double rel_err(const Field& a, const Field& ref) { return (a - ref).norm() / ref.norm(); }

}  // namespace lsweep::testing
