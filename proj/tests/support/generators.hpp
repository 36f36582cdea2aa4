#pragma once
// Seeded random inputs shared by the property tests and the acceptance suite.

#include <algorithm>
#include <random>
#include <vector>

#include "dflux/fixed_vec.hpp"

namespace dflux::gen {

/// Traffic state u = a rho with total per-lane density uniform in [0, max_total).
inline StateVec traffic_state(std::mt19937_64& rng, std::size_t m, double a, double max_total = 0.98) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double total = max_total * u01(rng);
  std::vector<double> w(m);
  double sw = 0.0;
  for (auto& x : w) sw += (x = u01(rng) + 1e-3);
  StateVec u(m);
  for (std::size_t l = 0; l < m; ++l) u[l] = a * total * w[l] / sw;
  return u;
}

/// (a, b_1 < ... < b_m <= 1) with a in [0.5, 4).
inline ThetaVec traffic_theta(std::mt19937_64& rng, std::size_t m) {
  std::uniform_real_distribution<double> lanes(0.5, 4.0), speeds(0.05, 0.99);
  std::vector<double> b(m);
  for (auto& x : b) x = speeds(rng);
  std::sort(b.begin(), b.end());
  for (std::size_t l = 1; l < m; ++l) {
    if (b[l] <= b[l - 1]) b[l] = b[l - 1] + 1e-3;
  }
  ThetaVec t(m + 1);
  t[0] = lanes(rng);
  for (std::size_t l = 0; l < m; ++l) t[l + 1] = b[l];
  return t;
}

}  // namespace dflux::gen
