#pragma once

// Truncated Fock-space states for one and two bosonic modes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heralded/errors.hpp"

namespace heralded {

using cplx = std::complex<double>;

inline constexpr int kMaxCutoff = 200;
inline constexpr double kNormTolerance = 1e-10;

/// Photon-number cutoffs for modes a and b.
class TruncationConfig {
 public:
  TruncationConfig(int n_max_a, int n_max_b) : n_max_a_(n_max_a), n_max_b_(n_max_b) {
    if (n_max_a < 1 || n_max_b < 1 || n_max_a > kMaxCutoff || n_max_b > kMaxCutoff) {
      throw std::invalid_argument("cutoffs must lie in [1, " + std::to_string(kMaxCutoff) +
                                  "], got (" + std::to_string(n_max_a) + ", " +
                                  std::to_string(n_max_b) + ")");
    }
  }
  int n_max_a() const { return n_max_a_; }
  int n_max_b() const { return n_max_b_; }
  friend bool operator==(const TruncationConfig&, const TruncationConfig&) = default;

 private:
  int n_max_a_;
  int n_max_b_;
};

namespace detail {

inline void require_finite(std::span<const cplx> v, const char* what) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument(std::string(what) + ": non-finite amplitude");
    }
  }
}

inline double norm_squared(std::span<const cplx> v) {
  return std::accumulate(v.begin(), v.end(), 0.0,
                         [](double acc, const cplx& z) { return acc + std::norm(z); });
}

}  // namespace detail

/// Amplitudes over n = 0..n_max for a single mode.
class SingleModeState {
 public:
  SingleModeState(std::vector<cplx> amplitudes, bool normalized)
      : amplitudes_(std::move(amplitudes)), normalized_(normalized) {
    if (amplitudes_.empty()) throw std::invalid_argument("single-mode state needs n_max >= 0");
    detail::require_finite(amplitudes_, "SingleModeState");
    if (normalized_ && std::abs(norm_squared() - 1.0) > kNormTolerance) {
      throw std::invalid_argument("SingleModeState flagged normalized but norm^2 = " +
                                  std::to_string(norm_squared()));
    }
  }

  static SingleModeState fock(int n, int n_max) {
    if (n < 0 || n > n_max) throw std::out_of_range("Fock index outside cutoff");
    std::vector<cplx> amps(static_cast<std::size_t>(n_max) + 1);
    amps[static_cast<std::size_t>(n)] = 1.0;
    return SingleModeState(std::move(amps), true);
  }

  std::span<const cplx> amplitudes() const { return amplitudes_; }
  cplx amplitude(int n) const { return amplitudes_.at(static_cast<std::size_t>(n)); }
  int n_max() const { return static_cast<int>(amplitudes_.size()) - 1; }
  bool normalized() const { return normalized_; }
  double norm_squared() const { return detail::norm_squared(amplitudes_); }

  std::vector<double> distribution() const {
    std::vector<double> p(amplitudes_.size());
    for (std::size_t n = 0; n < p.size(); ++n) p[n] = std::norm(amplitudes_[n]);
    return p;
  }

  SingleModeState normalized_copy() const {
    const double nrm = std::sqrt(norm_squared());
    if (nrm == 0.0) throw std::domain_error("cannot normalize the zero vector");
    std::vector<cplx> amps(amplitudes_);
    for (auto& z : amps) z /= nrm;
    return SingleModeState(std::move(amps), true);
  }

 private:
  std::vector<cplx> amplitudes_;
  bool normalized_;
};

/// Fock-diagonal density matrix of one mode.
class SingleModeDiagonalMixture {
 public:
  SingleModeDiagonalMixture(std::vector<double> weights, bool normalized)
      : weights_(std::move(weights)), normalized_(normalized) {
    if (weights_.empty()) throw std::invalid_argument("mixture needs at least one weight");
    for (double w : weights_) {
      if (!std::isfinite(w) || w < 0.0) {
        throw std::invalid_argument("mixture weights must be finite and nonnegative");
      }
    }
    if (normalized_ && std::abs(total() - 1.0) > kNormTolerance) {
      throw std::invalid_argument("mixture flagged normalized but weights sum to " +
                                  std::to_string(total()));
    }
  }

  std::span<const double> weights() const { return weights_; }
  int n_max() const { return static_cast<int>(weights_.size()) - 1; }
  bool normalized() const { return normalized_; }
  double total() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

 private:
  std::vector<double> weights_;
  bool normalized_;
};

/// Amplitude grid over (n_a, n_b), row-major in n_a.
class TwoModePureState {
 public:
  TwoModePureState(TruncationConfig config, std::vector<cplx> amplitudes, bool normalized)
      : config_(config), amplitudes_(std::move(amplitudes)), normalized_(normalized) {
    if (amplitudes_.size() != size_for(config_)) {
      throw std::invalid_argument("two-mode amplitude grid does not match the truncation");
    }
    detail::require_finite(amplitudes_, "TwoModePureState");
    if (normalized_ && std::abs(norm_squared() - 1.0) > kNormTolerance) {
      throw std::invalid_argument("TwoModePureState flagged normalized but norm^2 = " +
                                  std::to_string(norm_squared()));
    }
  }

  static std::size_t size_for(const TruncationConfig& c) {
    return static_cast<std::size_t>(c.n_max_a() + 1) * static_cast<std::size_t>(c.n_max_b() + 1);
  }

  const TruncationConfig& config() const { return config_; }
  bool normalized() const { return normalized_; }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  double norm_squared() const { return detail::norm_squared(amplitudes_); }

  std::size_t index(int n_a, int n_b) const {
    return static_cast<std::size_t>(n_a) * static_cast<std::size_t>(config_.n_max_b() + 1) +
           static_cast<std::size_t>(n_b);
  }
  cplx amplitude(int n_a, int n_b) const {
    if (n_a < 0 || n_b < 0 || n_a > config_.n_max_a() || n_b > config_.n_max_b()) {
      throw std::out_of_range("occupation pair outside the truncation");
    }
    return amplitudes_[index(n_a, n_b)];
  }

  double total_photon_expectation() const {
    double acc = 0.0;
    for (int na = 0; na <= config_.n_max_a(); ++na)
      for (int nb = 0; nb <= config_.n_max_b(); ++nb)
        acc += (na + nb) * std::norm(amplitudes_[index(na, nb)]);
    return acc;
  }

 private:
  TruncationConfig config_;
  std::vector<cplx> amplitudes_;
  bool normalized_;
};

/// Weighted list of normalized two-mode pure states.
class ModeEnsemble {
 public:
  struct Member {
    double weight;
    TwoModePureState state;
  };

  explicit ModeEnsemble(std::vector<Member> members) : members_(std::move(members)) {
    double sum = 0.0;
    for (const auto& m : members_) {
      if (!std::isfinite(m.weight) || m.weight < 0.0) {
        throw std::invalid_argument("ensemble weights must be finite and nonnegative");
      }
      if (!m.state.normalized()) throw std::invalid_argument("ensemble members must be normalized");
      sum += m.weight;
    }
    if (sum > 1.0 + kNormTolerance) {
      throw std::invalid_argument("ensemble weights sum above one: " + std::to_string(sum));
    }
  }

  std::span<const Member> members() const { return members_; }
  double total_weight() const {
    double s = 0.0;
    for (const auto& m : members_) s += m.weight;
    return s;
  }

 private:
  std::vector<Member> members_;
};

// ---------------------------------------------------------------------------
// State constructors.

inline constexpr double kTailNormalizedBelow = 1e-12;
inline constexpr double kTailErrorAbove = 1e-6;

/// exp(-|alpha|^2/2) alpha^n / sqrt(n!) by the ratio recurrence.
inline SingleModeState coherent_state(cplx alpha, int n_max) {
  if (n_max < 1) throw std::invalid_argument("coherent_state needs n_max >= 1");
  std::vector<cplx> amps(static_cast<std::size_t>(n_max) + 1);
  amps[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= n_max; ++n) {
    amps[static_cast<std::size_t>(n)] =
        amps[static_cast<std::size_t>(n) - 1] * alpha / std::sqrt(static_cast<double>(n));
  }
  const double tail = std::max(0.0, 1.0 - detail::norm_squared(amps));
  if (tail > kTailErrorAbove) throw CutoffTooSmall("coherent_state: cutoff too small", tail);
  return SingleModeState(std::move(amps), tail < kTailNormalizedBelow);
}

/// (cosh r)^(-1/2) exp((tanh r / 2) a^dag^2)|0>.
inline SingleModeState squeezed_vacuum_state(double r, int n_max) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("squeezing r must be >= 0");
  if (n_max < 2) throw std::invalid_argument("squeezed_vacuum_state needs n_max >= 2");
  const double half_tau = 0.5 * std::tanh(r);
  std::vector<cplx> amps(static_cast<std::size_t>(n_max) + 1);
  amps[0] = 1.0 / std::sqrt(std::cosh(r));
  for (int k = 1; 2 * k <= n_max; ++k) {
    const double ratio = half_tau * std::sqrt(static_cast<double>(2 * k) * (2 * k - 1)) / k;
    amps[static_cast<std::size_t>(2 * k)] = amps[static_cast<std::size_t>(2 * k - 2)] * ratio;
  }
  const double tail = std::max(0.0, 1.0 - detail::norm_squared(amps));
  if (tail > kTailErrorAbove) throw CutoffTooSmall("squeezed_vacuum_state: cutoff too small", tail);
  return SingleModeState(std::move(amps), tail < kTailNormalizedBelow);
}

struct ThermalWeights {
  std::vector<double> weights;  // P_m for m = 0..m_max
  double tail_mass;             // 1 - sum(weights)
};

/// Geometric photon distribution P_m = nbar^m / (1 + nbar)^(m+1).
inline ThermalWeights thermal_weights(double nbar, int m_max) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw std::invalid_argument("nbar must be >= 0");
  if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
  const double ratio = nbar / (1.0 + nbar);
  ThermalWeights out;
  out.weights.resize(static_cast<std::size_t>(m_max) + 1);
  out.weights[0] = 1.0 / (1.0 + nbar);
  for (int m = 1; m <= m_max; ++m) {
    out.weights[static_cast<std::size_t>(m)] = out.weights[static_cast<std::size_t>(m) - 1] * ratio;
  }
  out.tail_mass = std::pow(ratio, m_max + 1);
  return out;
}

/// |a_state>_a |n_b>_b.
inline TwoModePureState tensor_with_number(const SingleModeState& a_state, int n_b,
                                           TruncationConfig config) {
  if (n_b < 0 || n_b > config.n_max_b()) throw std::out_of_range("n_b outside mode-b cutoff");
  if (a_state.n_max() > config.n_max_a()) {
    throw std::out_of_range("mode-a state longer than the mode-a cutoff");
  }
  std::vector<cplx> amps(TwoModePureState::size_for(config));
  const auto stride = static_cast<std::size_t>(config.n_max_b() + 1);
  for (int na = 0; na <= a_state.n_max(); ++na) {
    amps[static_cast<std::size_t>(na) * stride + static_cast<std::size_t>(n_b)] =
        a_state.amplitude(na);
  }
  return TwoModePureState(config, std::move(amps), a_state.normalized());
}

// ---------------------------------------------------------------------------
// Ladder operators. Results are unnormalized; raising drops the component
// pushed above the cutoff.

inline SingleModeState raise(const SingleModeState& s) {
  std::vector<cplx> out(s.amplitudes().size());
  for (int n = 0; n < s.n_max(); ++n) {
    out[static_cast<std::size_t>(n) + 1] = std::sqrt(static_cast<double>(n + 1)) * s.amplitude(n);
  }
  return SingleModeState(std::move(out), false);
}

inline SingleModeState lower(const SingleModeState& s) {
  std::vector<cplx> out(s.amplitudes().size());
  for (int n = 1; n <= s.n_max(); ++n) {
    out[static_cast<std::size_t>(n) - 1] = std::sqrt(static_cast<double>(n)) * s.amplitude(n);
  }
  return SingleModeState(std::move(out), false);
}

inline TwoModePureState lower_a(const TwoModePureState& s) {
  const auto& c = s.config();
  std::vector<cplx> out(s.amplitudes().size());
  for (int na = 1; na <= c.n_max_a(); ++na)
    for (int nb = 0; nb <= c.n_max_b(); ++nb)
      out[s.index(na - 1, nb)] = std::sqrt(static_cast<double>(na)) * s.amplitude(na, nb);
  return TwoModePureState(c, std::move(out), false);
}

inline TwoModePureState lower_b(const TwoModePureState& s) {
  const auto& c = s.config();
  std::vector<cplx> out(s.amplitudes().size());
  for (int na = 0; na <= c.n_max_a(); ++na)
    for (int nb = 1; nb <= c.n_max_b(); ++nb)
      out[s.index(na, nb - 1)] = std::sqrt(static_cast<double>(nb)) * s.amplitude(na, nb);
  return TwoModePureState(c, std::move(out), false);
}

/// alpha*x + beta*y on a common truncation.
inline TwoModePureState combine(cplx alpha, const TwoModePureState& x, cplx beta,
                                const TwoModePureState& y) {
  if (!(x.config() == y.config())) throw std::invalid_argument("combine: truncation mismatch");
  std::vector<cplx> out(x.amplitudes().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * x.amplitudes()[i] + beta * y.amplitudes()[i];
  return TwoModePureState(x.config(), std::move(out), false);
}

inline double distance(const TwoModePureState& x, const TwoModePureState& y) {
  return std::sqrt(combine(1.0, x, -1.0, y).norm_squared());
}

}  // namespace heralded
