#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "loewner/driving.hpp"

namespace testing {

/// Fixed-seed generator so every property test is reproducible.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(g);
}

/// Random-walk driver on [t0, t0 + T] with n knots and increments of size
/// about scale * sqrt(dt).
inline loewner::DrivingFunction random_sampled(std::mt19937_64& g, int n, double T, double scale,
                                               double t0 = 0.0) {
  std::vector<double> t(n + 1), u(n + 1);
  std::normal_distribution<double> z(0.0, 1.0);
  u[0] = 0.0;
  for (int i = 0; i <= n; ++i) t[i] = t0 + T * i / n;
  for (int i = 1; i <= n; ++i) u[i] = u[i - 1] + scale * std::sqrt(T / n) * z(g);
  return loewner::DrivingFunction::sampled(t, u);
}

}  // namespace testing
