#pragma once

// Exact evolution under H = lambda (a^dag b + b^dag a) in a truncated basis.
//
// H conserves K = n_a + n_b, so the truncated space splits into one real
// symmetric tridiagonal block per K. Each block is diagonalized once per
// truncation; evolving to any lambda*t is then V exp(-i D lambda t) V^T.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "heralded/fock.hpp"
#include "heralded/phase.hpp"

namespace heralded {

/// One conserved-excitation sector. Basis index i <-> (n_a_min + i, K - n_a_min - i).
struct SectorBlock {
  int total;
  int n_a_min;
  int n_a_max;
  Eigen::MatrixXd hamiltonian;  // units of lambda
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  int size() const { return n_a_max - n_a_min + 1; }
};

class BlockDecomposition {
 public:
  BlockDecomposition(TruncationConfig config, std::vector<SectorBlock> blocks)
      : config_(config), blocks_(std::move(blocks)) {}

  const TruncationConfig& config() const { return config_; }
  const std::vector<SectorBlock>& blocks() const { return blocks_; }
  const SectorBlock& sector(int total) const { return blocks_.at(static_cast<std::size_t>(total)); }

 private:
  TruncationConfig config_;
  std::vector<SectorBlock> blocks_;
};

inline BlockDecomposition build_blocks(TruncationConfig config) {
  const int k_max = config.n_max_a() + config.n_max_b();
  std::vector<SectorBlock> blocks;
  blocks.reserve(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    SectorBlock blk;
    blk.total = k;
    blk.n_a_min = std::max(0, k - config.n_max_b());
    blk.n_a_max = std::min(k, config.n_max_a());
    const int dim = blk.size();
    blk.hamiltonian = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i + 1 < dim; ++i) {
      const int na = blk.n_a_min + i;
      const int nb = k - na;
      const double elem = std::sqrt(static_cast<double>(na + 1) * nb);
      blk.hamiltonian(i, i + 1) = elem;
      blk.hamiltonian(i + 1, i) = elem;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(blk.hamiltonian);
    if (solver.info() != Eigen::Success) throw std::runtime_error("sector eigensolver failed");
    blk.eigenvalues = solver.eigenvalues();
    blk.eigenvectors = solver.eigenvectors();
    blocks.push_back(std::move(blk));
  }
  return BlockDecomposition(config, std::move(blocks));
}

/// exp(-i H lambda t) |state>.
inline TwoModePureState evolve(const TwoModePureState& state, const CouplingPhase& phase,
                               const BlockDecomposition& blocks) {
  const auto& cfg = state.config();
  if (!(cfg == blocks.config())) throw std::invalid_argument("evolve: block/state truncation mismatch");
  const double lt = phase.radians();
  std::vector<cplx> out(state.amplitudes().size());
  const auto in = state.amplitudes();

  for (const auto& blk : blocks.blocks()) {
    const int dim = blk.size();
    Eigen::VectorXd re(dim), im(dim);
    bool any = false;
    for (int i = 0; i < dim; ++i) {
      const int na = blk.n_a_min + i;
      const cplx z = in[state.index(na, blk.total - na)];
      re(i) = z.real();
      im(i) = z.imag();
      any = any || z != cplx{};
    }
    if (!any) continue;
    const Eigen::VectorXd pr = blk.eigenvectors.transpose() * re;
    const Eigen::VectorXd pi = blk.eigenvectors.transpose() * im;
    Eigen::VectorXd qr(dim), qi(dim);
    for (int j = 0; j < dim; ++j) {
      // (pr + i pi) * exp(-i w lt)
      const double ph = -blk.eigenvalues(j) * lt;
      const double c = std::cos(ph), s = std::sin(ph);
      qr(j) = pr(j) * c - pi(j) * s;
      qi(j) = pr(j) * s + pi(j) * c;
    }
    const Eigen::VectorXd yr = blk.eigenvectors * qr;
    const Eigen::VectorXd yi = blk.eigenvectors * qi;
    for (int i = 0; i < dim; ++i) {
      const int na = blk.n_a_min + i;
      out[state.index(na, blk.total - na)] = {yr(i), yi(i)};
    }
  }
  return TwoModePureState(cfg, std::move(out), state.normalized());
}

inline TwoModePureState evolve(const TwoModePureState& state, const CouplingPhase& phase) {
  return evolve(state, phase, build_blocks(state.config()));
}

namespace detail {

// a^dag b on the grid: (n_a, n_b) -> (n_a + 1, n_b - 1).
inline std::vector<cplx> apply_a_dag_b(const TruncationConfig& c, const std::vector<cplx>& v) {
  const auto stride = static_cast<std::size_t>(c.n_max_b() + 1);
  std::vector<cplx> out(v.size());
  for (int na = 0; na < c.n_max_a(); ++na)
    for (int nb = 1; nb <= c.n_max_b(); ++nb)
      out[(na + 1) * stride + (nb - 1)] =
          std::sqrt(static_cast<double>(na + 1) * nb) * v[na * stride + nb];
  return out;
}

// b^dag a on the grid: (n_a, n_b) -> (n_a - 1, n_b + 1).
inline std::vector<cplx> apply_b_dag_a(const TruncationConfig& c, const std::vector<cplx>& v) {
  const auto stride = static_cast<std::size_t>(c.n_max_b() + 1);
  std::vector<cplx> out(v.size());
  for (int na = 1; na <= c.n_max_a(); ++na)
    for (int nb = 0; nb < c.n_max_b(); ++nb)
      out[(na - 1) * stride + (nb + 1)] =
          std::sqrt(static_cast<double>(na) * (nb + 1)) * v[na * stride + nb];
  return out;
}

// exp(coeff * X) v for a nilpotent shift X; the series terminates exactly.
template <class Apply>
std::vector<cplx> exp_nilpotent(const TruncationConfig& c, const std::vector<cplx>& v, cplx coeff,
                                Apply apply) {
  std::vector<cplx> sum = v;
  std::vector<cplx> term = v;
  const int max_terms = c.n_max_a() + c.n_max_b() + 1;
  for (int k = 1; k <= max_terms; ++k) {
    term = apply(c, term);
    bool nonzero = false;
    for (auto& z : term) {
      z *= coeff / static_cast<double>(k);
      nonzero = nonzero || z != cplx{};
    }
    if (!nonzero) break;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
  }
  return sum;
}

}  // namespace detail

inline constexpr double kFactoredGuardBand = 0.05;

/// Three-factor disentangled product
///   exp(-i a^dag b tan) exp((b^dag b - a^dag a) ln cos) exp(-i b^dag a tan)
/// applied with exact (terminating) series. Differential check for evolve().
inline TwoModePureState factored_evolve_check(const TwoModePureState& state,
                                              const CouplingPhase& phase) {
  const double lt = phase.radians();
  if (!(lt >= 0.0) || lt > std::numbers::pi / 2 - kFactoredGuardBand) {
    throw std::domain_error("factored evolution needs lambda t in [0, pi/2 - 0.05]");
  }
  const auto& c = state.config();
  const double t = std::tan(lt);
  const double log_cos = std::log(std::cos(lt));
  const cplx coeff{0.0, -t};

  std::vector<cplx> v(state.amplitudes().begin(), state.amplitudes().end());
  v = detail::exp_nilpotent(c, v, coeff, detail::apply_b_dag_a);
  for (int na = 0; na <= c.n_max_a(); ++na)
    for (int nb = 0; nb <= c.n_max_b(); ++nb)
      v[state.index(na, nb)] *= std::exp((nb - na) * log_cos);
  v = detail::exp_nilpotent(c, v, coeff, detail::apply_a_dag_b);
  return TwoModePureState(c, std::move(v), false);
}

inline ModeEnsemble evolve_ensemble(const ModeEnsemble& ensemble, const CouplingPhase& phase,
                                    const BlockDecomposition& blocks) {
  std::vector<ModeEnsemble::Member> out;
  out.reserve(ensemble.members().size());
  for (const auto& m : ensemble.members()) out.push_back({m.weight, evolve(m.state, phase, blocks)});
  return ModeEnsemble(std::move(out));
}

inline ModeEnsemble evolve_ensemble(const ModeEnsemble& ensemble, const CouplingPhase& phase) {
  if (ensemble.members().empty()) return ensemble;
  return evolve_ensemble(ensemble, phase, build_blocks(ensemble.members().front().state.config()));
}

}  // namespace heralded
