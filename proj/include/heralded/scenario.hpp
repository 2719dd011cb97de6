#pragma once

// Scenario descriptions, truncation defaults, and the two routes to a
// HeraldRecord: the closed forms and the evolve -> project -> statistics oracle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "heralded/analytics.hpp"
#include "heralded/dynamics.hpp"
#include "heralded/fock.hpp"
#include "heralded/heralding.hpp"
#include "heralded/observables.hpp"

namespace heralded {

struct Coherent {
  cplx alpha;
};
struct Thermal {
  double nbar;
};
struct SqueezedVacuum {
  double r;
};

using ScenarioSpec = std::variant<Coherent, Thermal, SqueezedVacuum>;

inline std::string scenario_name(const ScenarioSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Coherent>) return "coherent";
        else if constexpr (std::is_same_v<T, Thermal>) return "thermal";
        else return "squeezed";
      },
      spec);
}

inline std::string scenario_parameter(const ScenarioSpec& spec) {
  auto fmt = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  return std::visit(
      [&](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Coherent>) {
          return "alpha=" + fmt(s.alpha.real()) + (s.alpha.imag() != 0.0 ? "," + fmt(s.alpha.imag()) : "");
        } else if constexpr (std::is_same_v<T, Thermal>) {
          return "nbar=" + fmt(s.nbar);
        } else {
          return "r=" + fmt(s.r);
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Truncation defaults.

inline constexpr double kTailTarget = 1e-15;

/// Photon cutoff for the mode-a input: ceil(|a|^2 + 10 sqrt(|a|^2 + 1)) for
/// coherent light; for thermal and squeezed light the smallest n whose
/// analytic tail bound times n^3 falls below 1e-15. Capped at 200.
inline int default_cutoff(const ScenarioSpec& spec) {
  const int cut = std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Coherent>) {
          const double a2 = std::norm(s.alpha);
          return static_cast<int>(std::ceil(a2 + 10.0 * std::sqrt(a2 + 1.0)));
        } else if constexpr (std::is_same_v<T, Thermal>) {
          if (s.nbar == 0.0) return 1;
          const double q = s.nbar / (1.0 + s.nbar);
          int m = 1;
          // tail beyond m is q^{m+1}
          while (m < kMaxCutoff && std::pow(q, m + 1) * std::pow(m + 1.0, 3) > kTailTarget) ++m;
          return m;
        } else {
          const double tau2 = std::tanh(s.r) * std::tanh(s.r);
          if (tau2 == 0.0) return 2;
          // p_{2k} decreases by a ratio below tau^2, so tail(2k) <= p_{2k+2}/(1 - tau^2).
          double p = 1.0 / std::cosh(s.r);
          int k = 0;
          while (2 * k < kMaxCutoff) {
            const double next = p * tau2 * (2.0 * k + 1.0) / (2.0 * k + 2.0);
            if (next / (1.0 - tau2) * std::pow(2.0 * k + 2.0, 3) < kTailTarget) break;
            p = next;
            ++k;
          }
          return std::max(2, 2 * k);
        }
      },
      spec);
  return std::clamp(cut, 1, kMaxCutoff);
}

/// Two-mode truncation for the oracle: both modes one above the input cutoff
/// so the heralded photon fits, capped at 200.
inline TruncationConfig default_oracle_config(const ScenarioSpec& spec) {
  const int n = std::min(default_cutoff(spec) + 1, kMaxCutoff);
  return {n, n};
}

// ---------------------------------------------------------------------------
// Closed-form route.

inline HeraldRecord closed_form_record(const ScenarioSpec& spec, int herald_n, const CouplingPhase& phase,
                                       int n_cut) {
  return std::visit(
      [&](const auto& s) -> HeraldRecord {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Coherent>) return coherent_record(s.alpha, herald_n, phase, n_cut);
        else if constexpr (std::is_same_v<T, Thermal>) return thermal_record(s.nbar, herald_n, phase, n_cut);
        else return squeezed_record(s.r, herald_n, phase, n_cut);
      },
      spec);
}

// ---------------------------------------------------------------------------
// Oracle route.

/// Builds the initial two-mode state (or thermal ensemble) once, then
/// evolves, projects and measures for any (N, lambda t).
class OraclePipeline {
 public:
  OraclePipeline(const ScenarioSpec& spec, TruncationConfig config)
      : spec_(spec), config_(config), blocks_(std::make_shared<const BlockDecomposition>(build_blocks(config))) {
    const int n_a = config.n_max_a();
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Coherent>) {
            pure_.emplace(tensor_with_number(coherent_state(s.alpha, n_a), 1, config));
          } else if constexpr (std::is_same_v<T, SqueezedVacuum>) {
            pure_.emplace(tensor_with_number(squeezed_vacuum_state(s.r, n_a), 1, config));
          } else {
            // Members |m>_a|1>_b for m = 0..n_max_a - 1; the top level is left
            // empty so no member sits on the cutoff.
            const auto w = thermal_weights(s.nbar, n_a - 1);
            std::vector<ModeEnsemble::Member> members;
            for (int m = 0; m < n_a; ++m) {
              members.push_back({w.weights[static_cast<std::size_t>(m)],
                                 tensor_with_number(SingleModeState::fock(m, n_a), 1, config)});
            }
            ensemble_.emplace(std::move(members));
          }
        },
        spec);
  }

  explicit OraclePipeline(const ScenarioSpec& spec) : OraclePipeline(spec, default_oracle_config(spec)) {}

  const TruncationConfig& config() const { return config_; }
  const ScenarioSpec& spec() const { return spec_; }

  /// Records for several herald outcomes at one coupling phase (one evolution).
  std::vector<HeraldRecord> records(std::span<const int> heralds, const CouplingPhase& phase) const {
    std::vector<HeraldRecord> out;
    out.reserve(heralds.size());
    if (pure_) {
      const auto evolved = evolve(*pure_, phase, *blocks_);
      for (int n : heralds) out.push_back(to_record(project_pure(evolved, {n}), n, phase));
    } else {
      const auto evolved = evolve_ensemble(*ensemble_, phase, *blocks_);
      for (int n : heralds) out.push_back(to_record(project_ensemble(evolved, {n}), n, phase));
    }
    return out;
  }

  HeraldRecord record(int herald_n, const CouplingPhase& phase) const {
    const int h[] = {herald_n};
    return records(h, phase).front();
  }

 private:
  static HeraldRecord to_record(const HeraldedModeAState& h, int herald_n, const CouplingPhase& phase) {
    HeraldRecord rec;
    rec.lambda_t = phase.radians();
    rec.lambda_t_over_pi = phase.over_pi();
    rec.herald_n = herald_n;
    rec.herald_prob = h.probability();
    if (const auto st = statistics(h)) {
      rec.mean = st->mean;
      rec.mandel_q = st->mandel_q;
      rec.distribution = st->distribution;
    }
    return rec;
  }

  ScenarioSpec spec_;
  TruncationConfig config_;
  std::shared_ptr<const BlockDecomposition> blocks_;
  std::optional<TwoModePureState> pure_;
  std::optional<ModeEnsemble> ensemble_;
};

}  // namespace heralded
