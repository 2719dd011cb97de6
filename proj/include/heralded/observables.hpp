#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "heralded/fock.hpp"
#include "heralded/heralding.hpp"

namespace heralded {

inline constexpr double kUndefinedMeanBelow = 1e-14;

struct PhotonStatistics {
  double mean;
  std::optional<double> mandel_q;  // nullopt when the mean is below 1e-14
  std::vector<double> distribution;
};

/// Moments of a photon-number distribution. Q = (<n^2> - <n>^2)/<n> - 1.
inline PhotonStatistics statistics_from_distribution(std::span<const double> p) {
  double mean = 0.0, second = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double nn = static_cast<double>(n);
    mean += nn * p[n];
    second += nn * nn * p[n];
  }
  PhotonStatistics out{mean, std::nullopt, {p.begin(), p.end()}};
  if (mean >= kUndefinedMeanBelow) out.mandel_q = (second - mean * mean) / mean - 1.0;
  return out;
}

inline PhotonStatistics statistics(const SingleModeState& state) {
  const auto p = state.distribution();
  return statistics_from_distribution(p);
}

inline PhotonStatistics statistics(const SingleModeDiagonalMixture& state) {
  return statistics_from_distribution(state.weights());
}

inline std::optional<PhotonStatistics> statistics(const HeraldedModeAState& heralded) {
  if (heralded.is_zero_probability()) return std::nullopt;
  const auto p = heralded.distribution();
  return statistics_from_distribution(p);
}

/// <a^2 a^dag^2> = sum (n+1)(n+2) p_n. The state must leave the top two
/// levels empty so a^dag^2 does not leave the truncated space.
inline double a2ad2_moment(const SingleModeState& state) {
  const int top = state.n_max();
  for (int n = std::max(0, top - 1); n <= top; ++n) {
    if (std::norm(state.amplitude(n)) > 1e-12) {
      throw HeadroomError("a2ad2_moment: support reaches the cutoff");
    }
  }
  double acc = 0.0;
  for (int n = 0; n <= top; ++n) {
    acc += static_cast<double>(n + 1) * (n + 2) * std::norm(state.amplitude(n));
  }
  return acc;
}

}  // namespace heralded
