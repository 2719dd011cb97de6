#pragma once

// Photon-number projection of mode b and the conditional state of mode a.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "heralded/fock.hpp"

namespace heralded {

inline constexpr double kZeroProbability = 1e-14;

struct HeraldOutcome {
  int photons;
};

/// Collapsed mode-a state plus the probability of the outcome that produced it.
/// Outcomes with probability below 1e-14 carry no state.
class HeraldedModeAState {
 public:
  using Payload = std::variant<std::monostate, SingleModeState, SingleModeDiagonalMixture>;

  static HeraldedModeAState zero_probability(double probability) {
    return HeraldedModeAState(probability, std::monostate{});
  }
  HeraldedModeAState(double probability, SingleModeState state)
      : HeraldedModeAState(probability, Payload(std::move(state))) {}
  HeraldedModeAState(double probability, SingleModeDiagonalMixture state)
      : HeraldedModeAState(probability, Payload(std::move(state))) {}

  double probability() const { return probability_; }
  bool is_zero_probability() const { return std::holds_alternative<std::monostate>(payload_); }
  bool is_pure() const { return std::holds_alternative<SingleModeState>(payload_); }
  const SingleModeState& pure() const { return std::get<SingleModeState>(payload_); }
  const SingleModeDiagonalMixture& mixture() const {
    return std::get<SingleModeDiagonalMixture>(payload_);
  }
  const Payload& payload() const { return payload_; }

  /// Photon distribution of the collapsed state (empty for a zero-probability outcome).
  std::vector<double> distribution() const {
    if (is_pure()) return pure().distribution();
    if (const auto* mix = std::get_if<SingleModeDiagonalMixture>(&payload_)) {
      return {mix->weights().begin(), mix->weights().end()};
    }
    return {};
  }

 private:
  HeraldedModeAState(double probability, Payload payload)
      : probability_(probability), payload_(std::move(payload)) {
    if (!(probability >= 0.0) || probability > 1.0 + kNormTolerance) {
      throw std::invalid_argument("herald probability outside [0, 1]");
    }
  }

  double probability_;
  Payload payload_;
};

inline void check_outcome(const TruncationConfig& c, HeraldOutcome outcome) {
  if (outcome.photons < 0 || outcome.photons > c.n_max_b()) {
    throw std::out_of_range("herald outcome outside the mode-b cutoff");
  }
}

/// Project mode b onto |N>; the renormalized N-th column is the mode-a state.
inline HeraldedModeAState project_pure(const TwoModePureState& state, HeraldOutcome outcome) {
  const auto& c = state.config();
  check_outcome(c, outcome);
  std::vector<cplx> column(static_cast<std::size_t>(c.n_max_a()) + 1);
  double prob = 0.0;
  for (int na = 0; na <= c.n_max_a(); ++na) {
    column[static_cast<std::size_t>(na)] = state.amplitude(na, outcome.photons);
    prob += std::norm(column[static_cast<std::size_t>(na)]);
  }
  if (prob < kZeroProbability) return HeraldedModeAState::zero_probability(prob);
  const double nrm = std::sqrt(prob);
  for (auto& z : column) z /= nrm;
  return HeraldedModeAState(prob, SingleModeState(std::move(column), true));
}

/// Ensemble collapse. Only the photon-number distribution of mode a is kept.
inline HeraldedModeAState project_ensemble(const ModeEnsemble& ensemble, HeraldOutcome outcome) {
  if (ensemble.members().empty()) return HeraldedModeAState::zero_probability(0.0);
  const auto& c = ensemble.members().front().state.config();
  check_outcome(c, outcome);
  std::vector<double> weights(static_cast<std::size_t>(c.n_max_a()) + 1, 0.0);
  double prob = 0.0;
  for (const auto& m : ensemble.members()) {
    if (!(m.state.config() == c)) throw std::invalid_argument("ensemble members differ in truncation");
    if (m.weight == 0.0) continue;
    for (int na = 0; na <= c.n_max_a(); ++na) {
      const double p = m.weight * std::norm(m.state.amplitude(na, outcome.photons));
      weights[static_cast<std::size_t>(na)] += p;
      prob += p;
    }
  }
  if (prob < kZeroProbability) return HeraldedModeAState::zero_probability(prob);
  for (auto& w : weights) w /= prob;
  return HeraldedModeAState(prob, SingleModeDiagonalMixture(std::move(weights), true));
}

/// Probability of every mode-b outcome N = 0..n_max_b.
inline std::vector<double> herald_spectrum(const TwoModePureState& state) {
  const auto& c = state.config();
  std::vector<double> spec(static_cast<std::size_t>(c.n_max_b()) + 1, 0.0);
  for (int na = 0; na <= c.n_max_a(); ++na)
    for (int nb = 0; nb <= c.n_max_b(); ++nb)
      spec[static_cast<std::size_t>(nb)] += std::norm(state.amplitude(na, nb));
  return spec;
}

}  // namespace heralded
