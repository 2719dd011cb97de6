#pragma once

// Test-only references that do not share algebra with the library.

#include <cmath>
#include <numeric>
#include <vector>

#include "heralded/phase.hpp"

namespace heralded::reference {

// a^dag^n exp(kappa a^dag^2)|0> as a truncated Fock vector.
inline std::vector<double> dressed_vacuum(int n, double kappa, int n_max) {
  std::vector<double> even(static_cast<std::size_t>(n_max) + 1, 0.0);
  double u = 1.0;  // kappa^k sqrt((2k)!)/k!
  for (int k = 0; 2 * k <= n_max; ++k) {
    even[static_cast<std::size_t>(2 * k)] = u;
    u *= kappa * std::sqrt((2.0 * k + 1.0) * (2.0 * k + 2.0)) / (k + 1.0);
  }
  std::vector<double> out(even.size(), 0.0);
  for (int m = 0; m + n <= n_max; ++m) {
    double lift = 1.0;
    for (int j = 1; j <= n; ++j) lift *= std::sqrt(static_cast<double>(m + j));
    out[static_cast<std::size_t>(m + n)] = lift * even[static_cast<std::size_t>(m)];
  }
  return out;
}

/// <0| e^{kappa a^2} a^n1 a^dag^n2 e^{kappa a^dag^2} |0> by direct summation, n_max = 120.
inline double overlap_series(int n1, int n2, double r, const CouplingPhase& phase) {
  const double kappa = 0.5 * std::tanh(r) * phase.cos() * phase.cos();
  const auto v1 = dressed_vacuum(n1, kappa, 120);
  const auto v2 = dressed_vacuum(n2, kappa, 120);
  return std::inner_product(v1.begin(), v1.end(), v2.begin(), 0.0);
}

}  // namespace heralded::reference
