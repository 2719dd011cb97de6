#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "heralded/analytics.hpp"
#include "heralded/scenario.hpp"
#include "support.hpp"

using namespace heralded;

namespace {

using heralded::reference::overlap_series;

double near_rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST(HermiteAtZero, SmallValuesAndConventions) {
  EXPECT_EQ(hermite_at_zero(0).value(), 1.0);
  EXPECT_EQ(hermite_at_zero(2).value(), -2.0);
  EXPECT_EQ(hermite_at_zero(4).value(), 12.0);
  EXPECT_EQ(hermite_at_zero(6).value(), -120.0);
  EXPECT_EQ(hermite_at_zero(5).value(), 0.0);
  EXPECT_EQ(hermite_at_zero(-1).value(), 0.0);
  EXPECT_EQ(hermite_at_zero(-2).value(), 0.0);
  EXPECT_THROW(hermite_at_zero(-3), std::invalid_argument);
  // beyond the exact range the log form takes over
  const auto big = hermite_at_zero(62);
  EXPECT_FALSE(big.exact.has_value());
  EXPECT_NEAR(big.log_magnitude, std::lgamma(63.0) - std::lgamma(32.0), 1e-9);
  EXPECT_EQ(big.sign, -1);
}

TEST(SqueezedOverlap, MatchesFockSeries) {
  for (double r : {0.5, 1.0})
    for (double x : {0.125, 0.25, 0.375}) {
      const auto phase = CouplingPhase::from_pi_units(x);
      for (int n1 = 0; n1 <= 6; ++n1)
        for (int n2 = 0; n2 <= 6; ++n2) {
          const cplx closed = squeezed_overlap_I(n1, n2, r, phase);
          EXPECT_LT(near_rel(closed.real(), overlap_series(n1, n2, r, phase)), 1e-10) << n1 << "," << n2;
          EXPECT_LT(std::abs(closed.imag()), 1e-10);
          EXPECT_LT(std::abs(closed - std::conj(squeezed_overlap_I(n2, n1, r, phase))), 1e-10);
        }
    }
}

TEST(SqueezedOverlap, VacuumElementAndParityZeros) {
  const auto phase = CouplingPhase::from_pi_units(0.2);
  const double c = phase.cos(), t = std::tanh(0.7);
  EXPECT_NEAR(squeezed_overlap_I(0, 0, 0.7, phase).real(), 1.0 / std::sqrt(1.0 - c * c * c * c * t * t), 1e-12);
  EXPECT_EQ(squeezed_overlap_I(1, 2, 0.7, phase), cplx(0.0));
  EXPECT_EQ(squeezed_overlap_I(3, 0, 0.7, phase), cplx(0.0));
}

TEST(Coherent, DistributionMatchesDirectFactorials) {
  const cplx alpha{1.3, 0.4};
  for (int N : {1, 2, 3}) {
    const auto phase = CouplingPhase::from_pi_units(0.17);
    const auto k = coherent_coeffs(alpha, N, phase);
    const auto rec = coherent_record(alpha, N, phase, 30);
    const cplx ca = phase.cos() * alpha;
    double fact = 1.0;
    for (int n = 0; n <= 15; ++n) {
      if (n > 0) fact *= n;
      const cplx amp = n == 0 ? k.alpha0 : ca * k.alpha0 - cplx(0.0, n) * k.alpha1;
      const double scale = n == 0 ? 1.0 : std::pow(std::abs(ca), 2 * n - 2) / fact;
      const double expect = std::exp(-std::norm(ca)) * scale * std::norm(amp) / k.norm_c;
      EXPECT_NEAR(rec.distribution[static_cast<std::size_t>(n)], expect, 1e-14) << "N=" << N << " n=" << n;
    }
  }
}

TEST(Coherent, EndpointValues) {
  const auto zero = coherent_record(2.0, 1, CouplingPhase::from_pi_units(0.0), 40);
  EXPECT_DOUBLE_EQ(*zero.mean, 4.0);
  EXPECT_NEAR(*zero.mandel_q, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(zero.herald_prob, 1.0);

  const auto quarter = coherent_record(2.0, 1, CouplingPhase::from_pi_units(0.5), 40);
  EXPECT_NEAR(*quarter.mean, 1.0, 1e-15);
  EXPECT_NEAR(*quarter.mandel_q, -1.0, 1e-15);
  EXPECT_NEAR(quarter.herald_prob, 4.0 * std::exp(-4.0), 1e-15);
  EXPECT_NEAR(quarter.distribution[1], 1.0, 1e-15);
}

TEST(Coherent, NormalizationEqualsHeraldProbability) {
  const cplx alpha{0.9, -0.3};
  const OraclePipeline oracle(Coherent{alpha});
  for (double x : {0.1, 0.3, 0.45}) {
    const auto phase = CouplingPhase::from_pi_units(x);
    EXPECT_NEAR(coherent_coeffs(alpha, 2, phase).norm_c, oracle.record(2, phase).herald_prob, 1e-12);
  }
}

TEST(Coherent, VanishingHeraldIsDegenerate) {
  // N = 2 needs a photon from mode a; with alpha = 0 it never comes.
  const auto phase = CouplingPhase::from_pi_units(0.3);
  EXPECT_THROW(coherent_coeffs(0.0, 2, phase), DegenerateHerald);
  const auto rec = coherent_record(0.0, 2, phase, 10);
  EXPECT_TRUE(rec.degenerate());
  EXPECT_EQ(rec.herald_prob, 0.0);
}

TEST(Closed, RejectsNonPositiveHerald) {
  const auto phase = CouplingPhase::from_pi_units(0.3);
  EXPECT_THROW(coherent_record(1.0, 0, phase, 10), std::invalid_argument);
  EXPECT_THROW(thermal_record(1.0, 0, phase, 10), std::invalid_argument);
  EXPECT_THROW(squeezed_record(1.0, 0, phase, 10), std::invalid_argument);
}

TEST(Thermal, QuarterPeriodCollapse) {
  const auto rec = thermal_record(2.0, 1, CouplingPhase::from_pi_units(0.5), 100);
  EXPECT_NEAR(rec.herald_prob, 2.0 / 9.0, 1e-15);
  EXPECT_DOUBLE_EQ(*rec.mean, 1.0);
  EXPECT_DOUBLE_EQ(*rec.mandel_q, -1.0);
}

TEST(Thermal, ZeroTimeLeavesThermalLight) {
  // At lambda t = 0 the herald always fires and mode a keeps its thermal state.
  const auto rec = thermal_record(1.5, 1, CouplingPhase::from_pi_units(0.0), 300);
  EXPECT_NEAR(rec.herald_prob, 1.0, 1e-12);
  EXPECT_NEAR(*rec.mean, 1.5, 1e-10);
  EXPECT_NEAR(*rec.mandel_q, 1.5, 1e-9);
}

TEST(Thermal, MatchesOracle) {
  const OraclePipeline oracle(Thermal{1.0});
  for (int N : {1, 2, 3})
    for (double x : {0.05, 0.3, 0.5}) {
      const auto phase = CouplingPhase::from_pi_units(x);
      const auto a = thermal_record(1.0, N, phase, oracle.config().n_max_a());
      const auto b = oracle.record(N, phase);
      EXPECT_NEAR(a.herald_prob, b.herald_prob, 1e-12);
      EXPECT_LT(near_rel(*a.mean, *b.mean), 1e-9);
      EXPECT_LT(near_rel(*a.mandel_q, *b.mandel_q), 1e-8);
    }
}

TEST(Squeezed, MatchesOracle) {
  const OraclePipeline oracle(SqueezedVacuum{0.8});
  for (int N : {1, 2, 3})
    for (double x : {0.05, 0.2, 0.4}) {
      const auto phase = CouplingPhase::from_pi_units(x);
      const auto a = squeezed_record(0.8, N, phase, oracle.config().n_max_a());
      const auto b = oracle.record(N, phase);
      EXPECT_NEAR(a.herald_prob, b.herald_prob, 1e-12) << N << " " << x;
      EXPECT_LT(near_rel(*a.mean, *b.mean), 1e-9);
      EXPECT_LT(near_rel(*a.mandel_q, *b.mandel_q), 1e-8);
      for (std::size_t n = 0; n < b.distribution.size(); ++n) {
        EXPECT_NEAR(a.distribution[n], b.distribution[n], 1e-10);
      }
    }
}

TEST(Squeezed, ParityForbiddenHerald) {
  const auto rec = squeezed_record(1.0, 1, CouplingPhase::from_pi_units(0.5), 60);
  EXPECT_TRUE(rec.degenerate());
  EXPECT_LT(rec.herald_prob, 1e-12);
}

TEST(Squeezed, ZeroSqueezingIsRejected) {
  EXPECT_THROW(squeezed_coeffs(0.0, 1, CouplingPhase::from_pi_units(0.2)), DegenerateInput);
}

TEST(Squeezed, DistributionClosesAndHasEvenOrOddSupport) {
  const auto rec = squeezed_record(1.0, 2, CouplingPhase::from_pi_units(0.3), default_oracle_config(SqueezedVacuum{1.0}).n_max_a());
  const double sum = std::accumulate(rec.distribution.begin(), rec.distribution.end(), 0.0);
  EXPECT_NEAR(sum, 1.0, 1e-9);
  // herald N = 2 from a register holding 1 + even: mode a parity is odd
  for (std::size_t n = 0; n < rec.distribution.size(); n += 2) EXPECT_LT(rec.distribution[n], 1e-15);
}
