#pragma once

#include <cstdint>
#include <random>

#include "steinhaus/vector.hpp"

namespace testing_support {

// Seeded generator with platform-independent draws.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }

  steinhaus::Vec vec(int dim, double lo = -1.0, double hi = 1.0) {
    steinhaus::Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing_support
