#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <gtest/gtest.h>

#include "heralded/dynamics.hpp"

using namespace heralded;

namespace {

// Support limited to n_a + n_b <= max_total. Sectors above min(n_max_a, n_max_b)
// are cut by the truncation, so states that should follow the untruncated
// dynamics keep max_total at or below it.
TwoModePureState random_state(TruncationConfig c, std::mt19937& rng, int max_total) {
  std::normal_distribution<double> g;
  std::vector<cplx> amps(TwoModePureState::size_for(c));
  double n2 = 0.0;
  for (int na = 0; na <= c.n_max_a(); ++na)
    for (int nb = 0; nb <= c.n_max_b() && na + nb <= max_total; ++nb) {
      auto& z = amps[static_cast<std::size_t>(na) * (c.n_max_b() + 1) + nb];
      z = {g(rng), g(rng)};
      n2 += std::norm(z);
    }
  for (auto& z : amps) z /= std::sqrt(n2);
  return TwoModePureState(c, std::move(amps), true);
}

// Dense exp(-i lambda t (a^dag b + b^dag a)) on the full truncated space.
Eigen::MatrixXcd dense_propagator(TruncationConfig c, double lt) {
  const int nb1 = c.n_max_b() + 1;
  const int dim = (c.n_max_a() + 1) * nb1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int na = 0; na < c.n_max_a(); ++na)
    for (int nb = 1; nb <= c.n_max_b(); ++nb) {
      const double v = std::sqrt((na + 1.0) * nb);
      const int from = na * nb1 + nb, to = (na + 1) * nb1 + nb - 1;
      h(to, from) = v;
      h(from, to) = v;
    }
  return (cplx(0.0, -lt) * h).exp();
}

}  // namespace

TEST(BuildBlocks, SectorsCoverTheSpace) {
  TruncationConfig c(4, 2);
  const auto blocks = build_blocks(c);
  int total = 0;
  for (const auto& b : blocks.blocks()) total += b.size();
  EXPECT_EQ(total, 5 * 3);
  const auto& k3 = blocks.sector(3);
  EXPECT_EQ(k3.n_a_min, 1);
  EXPECT_EQ(k3.n_a_max, 3);
  const Eigen::MatrixXd recon = k3.eigenvectors * k3.eigenvalues.asDiagonal() * k3.eigenvectors.transpose();
  EXPECT_LT((recon - k3.hamiltonian).norm(), 1e-13);
}

TEST(Evolve, MatchesDenseExponential) {
  TruncationConfig c(5, 4);
  std::mt19937 rng(7);
  const auto psi = random_state(c, rng, 2 * kMaxCutoff);
  for (double x : {0.05, 0.25, 0.4, 0.5, 0.9}) {
    const auto phase = CouplingPhase::from_pi_units(x);
    const auto out = evolve(psi, phase);
    const Eigen::Map<const Eigen::VectorXcd> in(psi.amplitudes().data(), static_cast<Eigen::Index>(psi.amplitudes().size()));
    const Eigen::VectorXcd ref = dense_propagator(c, phase.radians()) * in;
    for (std::size_t i = 0; i < psi.amplitudes().size(); ++i) {
      EXPECT_LT(std::abs(ref(static_cast<Eigen::Index>(i)) - out.amplitudes()[i]), 1e-12);
    }
  }
}

TEST(Evolve, PreservesNormAndPhotonNumber) {
  TruncationConfig c(8, 8);
  std::mt19937 rng(11);
  const auto psi = random_state(c, rng, 2 * kMaxCutoff);
  const auto out = evolve(psi, CouplingPhase::from_radians(1.234));
  EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
  EXPECT_NEAR(out.total_photon_expectation(), psi.total_photon_expectation(), 1e-11);
  EXPECT_TRUE(out.normalized());
}

TEST(Evolve, ZeroTimeIsIdentityAndQuarterPeriodSwaps) {
  TruncationConfig c(3, 3);
  const auto psi = tensor_with_number(SingleModeState::fock(0, 3), 1, c);
  EXPECT_LT(distance(evolve(psi, CouplingPhase::from_pi_units(0.0)), psi), 1e-14);
  // |0,1> -> -i |1,0> at lambda t = pi/2
  const auto swapped = evolve(psi, CouplingPhase::from_pi_units(0.5));
  EXPECT_NEAR(std::abs(swapped.amplitude(1, 0) - cplx(0.0, -1.0)), 0.0, 1e-14);
}

TEST(Evolve, GroupProperty) {
  TruncationConfig c(6, 6);
  std::mt19937 rng(3);
  const auto psi = random_state(c, rng, 2 * kMaxCutoff);
  const auto two_steps = evolve(evolve(psi, CouplingPhase::from_pi_units(0.1)), CouplingPhase::from_pi_units(0.15));
  EXPECT_LT(distance(two_steps, evolve(psi, CouplingPhase::from_pi_units(0.25))), 1e-12);
}

TEST(FactoredForm, AgreesWithSpectralEvolution) {
  TruncationConfig c(6, 6);
  std::mt19937 rng(5);
  const auto psi = random_state(c, rng, 6);
  for (double x : {0.02, 0.2, 0.4}) {
    const auto phase = CouplingPhase::from_pi_units(x);
    EXPECT_LT(distance(factored_evolve_check(psi, phase), evolve(psi, phase)), 1e-10) << x;
  }
}

TEST(FactoredForm, RejectsPointsNearTheQuarterPeriod) {
  TruncationConfig c(2, 2);
  const auto psi = tensor_with_number(SingleModeState::fock(0, 2), 1, c);
  EXPECT_THROW(factored_evolve_check(psi, CouplingPhase::from_pi_units(0.5)), std::domain_error);
  EXPECT_THROW(factored_evolve_check(psi, CouplingPhase::from_radians(-0.1)), std::domain_error);
}

// evolve(a psi) = (c a + i s b) evolve(psi), evolve(b psi) = (c b + i s a) evolve(psi).
TEST(Heisenberg, LadderOperatorsRotate) {
  TruncationConfig c(7, 7);
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto psi = random_state(c, rng, 6);
    const auto phase = CouplingPhase::from_radians(0.3 + 0.2 * trial);
    const double co = phase.cos(), si = phase.sin();
    const auto u_psi = evolve(psi, phase);
    const auto lhs_a = evolve(lower_a(psi), phase);
    const auto rhs_a = combine(co, lower_a(u_psi), cplx(0.0, si), lower_b(u_psi));
    EXPECT_LT(distance(lhs_a, rhs_a), 1e-10);
    const auto lhs_b = evolve(lower_b(psi), phase);
    const auto rhs_b = combine(co, lower_b(u_psi), cplx(0.0, si), lower_a(u_psi));
    EXPECT_LT(distance(lhs_b, rhs_b), 1e-10);
  }
}

TEST(EvolveEnsemble, EvolvesEachMember) {
  TruncationConfig c(3, 3);
  const auto m0 = tensor_with_number(SingleModeState::fock(0, 3), 1, c);
  const auto m1 = tensor_with_number(SingleModeState::fock(2, 3), 1, c);
  const ModeEnsemble e({{0.25, m0}, {0.75, m1}});
  const auto phase = CouplingPhase::from_pi_units(0.3);
  const auto out = evolve_ensemble(e, phase);
  ASSERT_EQ(out.members().size(), 2u);
  EXPECT_DOUBLE_EQ(out.members()[1].weight, 0.75);
  EXPECT_LT(distance(out.members()[1].state, evolve(m1, phase)), 1e-15);
}
