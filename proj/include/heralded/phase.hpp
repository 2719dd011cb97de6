#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heralded {

namespace detail {

// cos(pi x) with exact results whenever 2x is an integer.
inline double cos_pi(double x) {
  const double twice = 2.0 * x;
  if (std::isfinite(twice) && twice == std::nearbyint(twice)) {
    const long long q = static_cast<long long>(std::nearbyint(twice));
    switch (((q % 4) + 4) % 4) {
      case 0: return 1.0;
      case 1: return 0.0;
      case 2: return -1.0;
      default: return 0.0;
    }
  }
  return std::cos(std::numbers::pi * x);
}

inline double sin_pi(double x) { return cos_pi(x - 0.5); }

}  // namespace detail

/// Dimensionless coupling phase lambda*t.
///
/// Held in units of pi so that the beamsplitter limits (lambda t = pi/2,
/// where cos vanishes) are represented exactly.
class CouplingPhase {
 public:
  static CouplingPhase from_radians(double lambda_t) {
    return CouplingPhase(lambda_t / std::numbers::pi);
  }
  static CouplingPhase from_pi_units(double over_pi) { return CouplingPhase(over_pi); }

  double radians() const { return over_pi_ * std::numbers::pi; }
  double over_pi() const { return over_pi_; }
  double cos() const { return detail::cos_pi(over_pi_); }
  double sin() const { return detail::sin_pi(over_pi_); }

 private:
  explicit CouplingPhase(double over_pi) : over_pi_(over_pi) {
    if (!std::isfinite(over_pi)) throw std::invalid_argument("coupling phase must be finite");
  }
  double over_pi_;
};

}  // namespace heralded
