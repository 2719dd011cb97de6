#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "heralded/fock.hpp"

using namespace heralded;

TEST(TruncationConfig, RejectsOutOfRangeCutoffs) {
  EXPECT_THROW(TruncationConfig(0, 5), std::invalid_argument);
  EXPECT_THROW(TruncationConfig(5, 201), std::invalid_argument);
  EXPECT_NO_THROW(TruncationConfig(200, 1));
}

TEST(SingleModeState, NormalizedFlagIsChecked) {
  EXPECT_THROW(SingleModeState({1.0, 1.0}, true), std::invalid_argument);
  EXPECT_NO_THROW(SingleModeState({1.0, 1.0}, false));
  EXPECT_THROW(SingleModeState({}, false), std::invalid_argument);
  EXPECT_THROW(SingleModeState({cplx(NAN, 0.0)}, false), std::invalid_argument);
}

TEST(SingleModeState, FockStateIsUnitVector) {
  const auto s = SingleModeState::fock(3, 5);
  EXPECT_EQ(s.n_max(), 5);
  EXPECT_EQ(s.amplitude(3), cplx(1.0));
  EXPECT_DOUBLE_EQ(s.norm_squared(), 1.0);
  EXPECT_THROW(SingleModeState::fock(6, 5), std::out_of_range);
}

TEST(CoherentState, AmplitudesMatchPoisson) {
  const cplx alpha{1.2, -0.4};
  const auto s = coherent_state(alpha, 40);
  EXPECT_TRUE(s.normalized());
  const double a2 = std::norm(alpha);
  double fact = 1.0;
  for (int n = 0; n <= 12; ++n) {
    if (n > 0) fact *= n;
    const double expect = std::exp(-a2) * std::pow(a2, n) / fact;
    EXPECT_NEAR(std::norm(s.amplitude(n)), expect, 1e-15);
  }
  const auto ratio = s.amplitude(1) / s.amplitude(0);
  EXPECT_NEAR(std::abs(ratio - alpha), 0.0, 1e-14);
}

TEST(CoherentState, ShortCutoffThrows) {
  EXPECT_THROW(coherent_state(3.0, 5), CutoffTooSmall);
  try {
    coherent_state(3.0, 5);
  } catch (const CutoffTooSmall& e) {
    EXPECT_GT(e.tail_mass(), 1e-6);
  }
}

TEST(SqueezedVacuum, EvenAmplitudesFollowClosedForm) {
  const double r = 0.8;
  const auto s = squeezed_vacuum_state(r, 120);
  const double tau = std::tanh(r);
  for (int k = 0; k <= 8; ++k) {
    double ratio = 1.0;  // (2k)! / (k!)^2 / 4^k
    for (int j = 1; j <= k; ++j) ratio *= (2.0 * j) * (2.0 * j - 1.0) / (4.0 * j * j);
    const double expect = std::sqrt(ratio) * std::pow(tau, k) / std::sqrt(std::cosh(r));
    EXPECT_NEAR(std::abs(s.amplitude(2 * k)), expect, 1e-14) << "k=" << k;
    EXPECT_EQ(s.amplitude(2 * k + 1), cplx(0.0));
  }
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
}

TEST(ThermalWeights, GeometricWithTail) {
  const auto w = thermal_weights(2.0, 30);
  EXPECT_DOUBLE_EQ(w.weights[0], 1.0 / 3.0);
  EXPECT_NEAR(w.weights[4], std::pow(2.0, 4) / std::pow(3.0, 5), 1e-16);
  const double sum = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
  EXPECT_NEAR(sum + w.tail_mass, 1.0, 1e-14);
  EXPECT_THROW(thermal_weights(-1.0, 3), std::invalid_argument);
}

TEST(TwoModePureState, TensorPlacesAmplitudes) {
  TruncationConfig c(4, 3);
  const auto s = tensor_with_number(SingleModeState({0.6, cplx(0.0, 0.8)}, true), 2, c);
  EXPECT_EQ(s.amplitude(0, 2), cplx(0.6));
  EXPECT_EQ(s.amplitude(1, 2), cplx(0.0, 0.8));
  EXPECT_EQ(s.amplitude(1, 1), cplx(0.0));
  EXPECT_NEAR(s.total_photon_expectation(), 0.36 * 2 + 0.64 * 3, 1e-15);
  EXPECT_THROW(tensor_with_number(SingleModeState::fock(0, 1), 4, c), std::out_of_range);
  EXPECT_THROW(tensor_with_number(SingleModeState::fock(0, 6), 1, c), std::out_of_range);
}

TEST(Ladder, LowerAndRaise) {
  const auto s = SingleModeState::fock(2, 4);
  EXPECT_NEAR(std::abs(lower(s).amplitude(1)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(raise(s).amplitude(3)), std::sqrt(3.0), 1e-15);
  // raising the top level falls off the truncation
  EXPECT_DOUBLE_EQ(raise(SingleModeState::fock(4, 4)).norm_squared(), 0.0);

  TruncationConfig c(3, 3);
  const auto t = tensor_with_number(SingleModeState::fock(2, 3), 3, c);
  EXPECT_NEAR(std::abs(lower_a(t).amplitude(1, 3)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(lower_b(t).amplitude(2, 2)), std::sqrt(3.0), 1e-15);
}

TEST(ModeEnsemble, ValidatesWeightsAndMembers) {
  TruncationConfig c(2, 2);
  const auto m0 = tensor_with_number(SingleModeState::fock(0, 2), 1, c);
  const auto m1 = tensor_with_number(SingleModeState::fock(1, 2), 1, c);
  EXPECT_NO_THROW(ModeEnsemble({{0.5, m0}, {0.5, m1}}));
  EXPECT_THROW(ModeEnsemble({{0.7, m0}, {0.5, m1}}), std::invalid_argument);
  EXPECT_THROW(ModeEnsemble({{-0.1, m0}}), std::invalid_argument);
  const auto loose = TwoModePureState(c, std::vector<cplx>(9, 1.0), false);
  EXPECT_THROW(ModeEnsemble({{0.5, loose}}), std::invalid_argument);
}
