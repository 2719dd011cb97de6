#pragma once

// Closed-form heralded-state statistics for coherent, thermal and
// squeezed-vacuum inputs on mode a with a single photon on mode b.
//
// Notation: c = cos(lambda t), s = sin(lambda t), tau = tanh r.
// Factorial-bearing factors are combined in the log domain with separate
// signs; 0^0 is taken as 1 wherever a power meets its degenerate point.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heralded/errors.hpp"
#include "heralded/fock.hpp"
#include "heralded/observables.hpp"
#include "heralded/phase.hpp"

namespace heralded {

/// One point of a heralded time sweep.
struct HeraldRecord {
  double lambda_t = 0.0;          // radians
  double lambda_t_over_pi = 0.0;
  int herald_n = 0;
  std::optional<double> mean;      // undefined for degenerate heralds
  std::optional<double> mandel_q;  // undefined for degenerate heralds or vacuum
  double herald_prob = 0.0;
  std::vector<double> distribution;

  bool degenerate() const { return !mean.has_value(); }
};

inline constexpr double kDegenerateNorm = 1e-14;

namespace detail {

// z^k for k >= 0 with 0^0 = 1.
inline cplx ipow(cplx z, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

inline double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

// i^k for any integer k.
inline cplx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline HeraldRecord degenerate_record(const CouplingPhase& phase, int herald_n, double prob) {
  HeraldRecord rec;
  rec.lambda_t = phase.radians();
  rec.lambda_t_over_pi = phase.over_pi();
  rec.herald_n = herald_n;
  rec.herald_prob = std::max(0.0, prob);
  return rec;
}

inline void require_herald(int herald_n) {
  if (herald_n < 1) {
    throw std::invalid_argument("closed forms need N >= 1 (N = " + std::to_string(herald_n) + ")");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hermite polynomials at the origin.

/// H_n(0): zero for odd n (and, by convention, for n < 0);
/// (-1)^k (2k)!/k! for n = 2k.
struct HermiteAtZero {
  int sign = 0;                       // -1, 0 or +1
  double log_magnitude = 0.0;         // log|H_n(0)| when sign != 0
  std::optional<std::int64_t> exact;  // available while the value fits in 64 bits

  double value() const {
    if (sign == 0) return 0.0;
    if (exact) return static_cast<double>(*exact);
    return sign * std::exp(log_magnitude);
  }
};

inline HermiteAtZero hermite_at_zero(int n) {
  if (n < -2) throw std::invalid_argument("hermite_at_zero: index below -2");
  HermiteAtZero h;
  if (n < 0 || n % 2 != 0) {
    h.exact = 0;
    return h;
  }
  const int k = n / 2;
  h.sign = (k % 2 == 0) ? 1 : -1;
  h.log_magnitude = detail::log_factorial(n) - detail::log_factorial(k);
  if (n <= 28) {
    // (2k)!/k! = (k+1)(k+2)...(2k)
    std::int64_t v = 1;
    for (int j = k + 1; j <= n; ++j) v *= j;
    h.exact = h.sign * v;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Coherent input |alpha>_a |1>_b.

struct CoherentCoefficients {
  cplx alpha0;
  cplx alpha1;
  double norm_c;
};

/// alpha0, alpha1 of the collapsed ket alpha0|c alpha> - i alpha1 a^dag|c alpha>
/// and its norm N_c. Throws DegenerateHerald when N_c < 1e-14.
inline CoherentCoefficients coherent_coeffs(cplx alpha, int herald_n, const CouplingPhase& phase) {
  detail::require_herald(herald_n);
  const double c = phase.cos(), s = phase.sin();
  const double gauss = std::exp(-0.5 * std::norm(alpha) * s * s);
  const cplx beta_b = cplx{0.0, -1.0} * alpha * s;  // mode-b displacement -i alpha s
  const double nn = herald_n;

  CoherentCoefficients k;
  k.alpha0 = gauss * c * detail::ipow(beta_b, herald_n - 1) * std::sqrt(nn) /
             std::sqrt(detail::factorial(herald_n - 1));
  k.alpha1 = gauss * s * detail::ipow(beta_b, herald_n) / std::sqrt(detail::factorial(herald_n));

  const cplx i{0.0, 1.0};
  const cplx norm = std::norm(k.alpha0) + std::norm(k.alpha1) * (1.0 + std::norm(alpha) * c * c) +
                    i * c * (alpha * k.alpha0 * std::conj(k.alpha1) -
                             std::conj(alpha) * std::conj(k.alpha0) * k.alpha1);
  if (std::abs(norm.imag()) > 1e-12 * std::max(1.0, std::abs(norm.real()))) {
    throw std::logic_error("coherent normalization has an imaginary residue");
  }
  k.norm_c = norm.real();
  if (k.norm_c < kDegenerateNorm) {
    throw DegenerateHerald("coherent herald N=" + std::to_string(herald_n) +
                           " has vanishing probability at lambda t/pi=" +
                           std::to_string(phase.over_pi()));
  }
  return k;
}

/// Mean photon number, Mandel Q, herald probability (= N_c) and photon
/// distribution over n = 0..n_cut of the collapsed coherent-scenario state.
inline HeraldRecord coherent_record(cplx alpha, int herald_n, const CouplingPhase& phase, int n_cut) {
  detail::require_herald(herald_n);
  if (n_cut < 1) throw std::invalid_argument("n_cut must be >= 1");
  CoherentCoefficients k;
  try {
    k = coherent_coeffs(alpha, herald_n, phase);
  } catch (const DegenerateHerald&) {
    return detail::degenerate_record(phase, herald_n, 0.0);
  }
  const double c = phase.cos();
  const cplx i{0.0, 1.0};
  const double c2a2 = c * c * std::norm(alpha);
  const cplx ca = c * alpha;

  const double mean = (c2a2 * std::norm(k.alpha1) +
                       std::norm(ca * k.alpha0 - i * (1.0 + c2a2) * k.alpha1)) / k.norm_c;
  HeraldRecord rec;
  rec.lambda_t = phase.radians();
  rec.lambda_t_over_pi = phase.over_pi();
  rec.herald_n = herald_n;
  rec.herald_prob = k.norm_c;
  rec.mean = mean;
  if (mean >= kUndefinedMeanBelow) {
    rec.mandel_q = c2a2 / (mean * k.norm_c) *
                       (c2a2 * std::norm(k.alpha1) +
                        std::norm(ca * k.alpha0 - i * (2.0 + c2a2) * k.alpha1)) -
                   mean;
  }

  // P_n = e^{-|c alpha|^2} |c alpha|^{2n-2} / n! |c alpha alpha0 - i n alpha1|^2 / N_c
  rec.distribution.resize(static_cast<std::size_t>(n_cut) + 1);
  const double abs_ca = std::abs(ca);
  for (int n = 0; n <= n_cut; ++n) {
    double p;
    if (n == 0) {
      p = std::exp(-c2a2) * std::norm(k.alpha0);
    } else {
      const double bracket = std::norm(ca * k.alpha0 - i * static_cast<double>(n) * k.alpha1);
      if (bracket == 0.0) {
        p = 0.0;
      } else if (abs_ca == 0.0) {
        p = (n == 1) ? bracket : 0.0;
      } else {
        p = std::exp(-c2a2 + (2.0 * n - 2.0) * std::log(abs_ca) - detail::log_factorial(n)) * bracket;
      }
    }
    rec.distribution[static_cast<std::size_t>(n)] = p / k.norm_c;
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Thermal input sum_m P_m |m><m|_a (x) |1><1|_b.

/// Unnormalized weight of |m><m|_a in the collapsed thermal density matrix:
///   P_{N+m-1} C(N+m, N)/(N+m) c^{2m-2} s^{2N-2} (s^2 m - c^2 N)^2,
/// with the m = 0 pole cancelled: c^2 N s^{2N-2} P_{N-1}.
inline double thermal_collapsed_weight(double nbar, int herald_n, int m, double c, double s) {
  const int k = herald_n + m - 1;  // thermal index feeding this term
  const double log_pk = (nbar == 0.0)
                            ? (k == 0 ? 0.0 : -INFINITY)
                            : k * std::log(nbar / (1.0 + nbar)) - std::log1p(nbar);
  if (std::isinf(log_pk)) return 0.0;
  const double s_pow = detail::ipow(s, 2 * herald_n - 2);
  if (m == 0) return std::exp(log_pk) * c * c * herald_n * s_pow;
  const double geom = s * s * m - c * c * herald_n;
  if (geom == 0.0 || s_pow == 0.0) return 0.0;
  const double c_pow = detail::ipow(c, 2 * m - 2);
  if (c_pow == 0.0) return 0.0;
  const double log_comb = detail::log_factorial(herald_n + m) - detail::log_factorial(herald_n) -
                          detail::log_factorial(m) - std::log(static_cast<double>(herald_n + m));
  return std::exp(log_pk + log_comb) * c_pow * s_pow * geom * geom;
}

inline HeraldRecord thermal_record(double nbar, int herald_n, const CouplingPhase& phase, int m_cut) {
  detail::require_herald(herald_n);
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw std::invalid_argument("nbar must be >= 0");
  if (m_cut < 1) throw std::invalid_argument("m_cut must be >= 1");
  const double c = phase.cos(), s = phase.sin();

  std::vector<double> w(static_cast<std::size_t>(m_cut) + 1);
  double norm_t = 0.0, first = 0.0, factorial2 = 0.0;
  for (int m = 0; m <= m_cut; ++m) {
    const double wm = thermal_collapsed_weight(nbar, herald_n, m, c, s);
    w[static_cast<std::size_t>(m)] = wm;
    norm_t += wm;
    first += wm * m;
    factorial2 += wm * m * (m - 1.0);
  }
  if (norm_t < kDegenerateNorm) return detail::degenerate_record(phase, herald_n, norm_t);

  HeraldRecord rec;
  rec.lambda_t = phase.radians();
  rec.lambda_t_over_pi = phase.over_pi();
  rec.herald_n = herald_n;
  rec.herald_prob = norm_t;
  const double mean = first / norm_t;
  rec.mean = mean;
  if (mean >= kUndefinedMeanBelow) rec.mandel_q = -mean + factorial2 / (norm_t * mean);
  for (auto& x : w) x /= norm_t;
  rec.distribution = std::move(w);
  return rec;
}

// ---------------------------------------------------------------------------
// Squeezed-vacuum input (cosh r)^{-1/2} exp(tau/2 a^dag^2)|0>_a |1>_b.

/// I_{n1,n2} = <0| e^{kappa a^2} a^{n1} a^dag^{n2} e^{kappa a^dag^2} |0>, kappa = tau c^2/2,
/// via the Gaussian-integral double sum over Hermite values at zero.
inline cplx squeezed_overlap_I(int n1, int n2, double r, const CouplingPhase& phase) {
  if (n1 < 0 || n2 < 0) throw std::invalid_argument("overlap indices must be >= 0");
  if (!(r >= 0.0)) throw std::invalid_argument("squeezing r must be >= 0");
  const double c = phase.cos();
  const double x = c * c * std::tanh(r);
  if (!(x < 1.0)) throw std::domain_error("overlap integral diverges for c^2 tanh r >= 1");
  if ((n1 + n2) % 2 != 0) return 0.0;

  const double log_minus = -0.5 * std::log1p(-x);  // log 1/sqrt(1 - x)
  const double log_plus = -0.5 * std::log1p(x);    // log 1/sqrt(1 + x)
  cplx sum = 0.0;
  for (int m1 = 0; m1 <= n1; ++m1) {
    for (int m2 = 0; m2 <= n2; ++m2) {
      const int p = n2 + m1 - m2;
      const int q = n1 + m2 - m1;
      const auto hp = hermite_at_zero(p);
      const auto hq = hermite_at_zero(q);
      if (hp.sign == 0 || hq.sign == 0) continue;
      const double log_mag = detail::log_factorial(n1) - detail::log_factorial(m1) -
                             detail::log_factorial(n1 - m1) + detail::log_factorial(n2) -
                             detail::log_factorial(m2) - detail::log_factorial(n2 - m2) +
                             p * log_minus + q * log_plus + hp.log_magnitude + hq.log_magnitude -
                             (n1 + n2) * std::log(2.0);
      // (-i)^{n2+m1+m2} = i^{-(n2+m1+m2)}
      sum += static_cast<double>(hp.sign * hq.sign) * std::exp(log_mag) * detail::i_pow(-(n2 + m1 + m2));
    }
  }
  return sum / std::sqrt((1.0 - x) * (1.0 + x));
}

struct SqueezedCoefficients {
  std::vector<cplx> q;                      // Q_m, m = 0..N+1
  double norm_sq;                           // N_sq
  std::vector<std::vector<cplx>> overlaps;  // I_{n,m}, n, m = 0..N+3
  double prefactor;                         // 2 tau N!/cosh r (tau s^2 / 2)^{N-1}
};

/// Q_m of the compact collapsed ket, the overlap matrix and N_sq.
/// Throws DegenerateInput for r = 0, where every closed-form prefactor vanishes.
inline SqueezedCoefficients squeezed_coeffs(double r, int herald_n, const CouplingPhase& phase) {
  detail::require_herald(herald_n);
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("squeezing r must be >= 0");
  if (r == 0.0) {
    throw DegenerateInput("squeezed closed form is degenerate at r = 0; use the oracle path");
  }
  const double c = phase.cos(), s = phase.sin();
  const double tau = std::tanh(r);
  const int N = herald_n;
  const cplx unit{0.0, -std::sqrt(2.0 * tau) * c};  // -i sqrt(2 tau) c

  SqueezedCoefficients out;
  out.q.resize(static_cast<std::size_t>(N) + 2);
  for (int m = 0; m <= N + 1; ++m) {
    // (-i sqrt(2 tau) c)^{m-1} times c^2 (first term) and s^2/2 (second term).
    cplx first_pow;
    cplx second_pow;
    if (m == 0) {
      first_pow = cplx{0.0, c / std::sqrt(2.0 * tau)};  // c^2 / (-i sqrt(2 tau) c)
      second_pow = 0.0;                                  // multiplied by m = 0
    } else {
      const cplx base = detail::ipow(unit, m - 1);
      first_pow = base * (c * c);
      second_pow = base;
    }
    const double h_low = hermite_at_zero(N - 1 - m).value();
    const double h_high = hermite_at_zero(N + 1 - m).value();
    const cplx bracket = first_pow * static_cast<double>((N - m) * (N + 1 - m)) * h_low +
                         second_pow * (0.5 * s * s * m) * h_high;
    out.q[static_cast<std::size_t>(m)] = bracket / (detail::factorial(m) * detail::factorial(N + 1 - m));
  }

  const int dim = N + 4;
  out.overlaps.assign(static_cast<std::size_t>(dim), std::vector<cplx>(static_cast<std::size_t>(dim)));
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m)
      out.overlaps[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] = squeezed_overlap_I(n, m, r, phase);

  out.prefactor = 2.0 * tau * detail::factorial(N) / std::cosh(r) * detail::ipow(0.5 * tau * s * s, N - 1);
  cplx quad = 0.0;
  for (int n = 0; n <= N + 1; ++n)
    for (int m = 0; m <= N + 1; ++m)
      quad += std::conj(out.q[static_cast<std::size_t>(n)]) * out.q[static_cast<std::size_t>(m)] *
              out.overlaps[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
  out.norm_sq = out.prefactor * quad.real();
  return out;
}

namespace detail {

// sum_{n,m} Q_n^* Q_m I_{n+shift, m+shift}
inline double squeezed_quadratic(const SqueezedCoefficients& k, int shift) {
  cplx acc = 0.0;
  const int top = static_cast<int>(k.q.size()) - 1;
  for (int n = 0; n <= top; ++n)
    for (int m = 0; m <= top; ++m)
      acc += std::conj(k.q[static_cast<std::size_t>(n)]) * k.q[static_cast<std::size_t>(m)] *
             k.overlaps[static_cast<std::size_t>(n + shift)][static_cast<std::size_t>(m + shift)];
  return acc.real();
}

}  // namespace detail

inline HeraldRecord squeezed_record(double r, int herald_n, const CouplingPhase& phase, int n_cut) {
  if (n_cut < 1) throw std::invalid_argument("n_cut must be >= 1");
  const auto k = squeezed_coeffs(r, herald_n, phase);
  const double prob = k.norm_sq;  // herald probability equals N_sq
  if (prob < kDegenerateNorm) return detail::degenerate_record(phase, herald_n, prob);

  const double scale = k.prefactor / k.norm_sq;
  const double mean = scale * detail::squeezed_quadratic(k, 1) - 1.0;
  const double anti = scale * detail::squeezed_quadratic(k, 2);  // <a^2 a^dag^2>

  HeraldRecord rec;
  rec.lambda_t = phase.radians();
  rec.lambda_t_over_pi = phase.over_pi();
  rec.herald_n = herald_n;
  rec.herald_prob = prob;
  rec.mean = mean;
  if (mean >= kUndefinedMeanBelow) rec.mandel_q = (anti - 2.0) / mean - mean - 4.0;

  // P_n = scale * sum_{l,m} i^{l-m} n! H_{n-l}(0) H_{n-m}(0) / ((n-l)!(n-m)!)
  //               * (sqrt(tau/2) c)^{2n-l-m} Q_l^* Q_m
  const double base = std::sqrt(0.5 * std::tanh(r)) * phase.cos();
  const double log_base = (base == 0.0) ? 0.0 : std::log(std::abs(base));
  const int base_sign = base < 0.0 ? -1 : 1;
  const int top = herald_n + 1;
  rec.distribution.resize(static_cast<std::size_t>(n_cut) + 1);
  for (int n = 0; n <= n_cut; ++n) {
    cplx acc = 0.0;
    const int lim = std::min(n, top);
    for (int l = 0; l <= lim; ++l) {
      const auto hl = hermite_at_zero(n - l);
      if (hl.sign == 0) continue;
      for (int m = 0; m <= lim; ++m) {
        const auto hm = hermite_at_zero(n - m);
        if (hm.sign == 0) continue;
        const int power = 2 * n - l - m;
        if (base == 0.0 && power > 0) continue;
        const double log_mag = detail::log_factorial(n) + hl.log_magnitude + hm.log_magnitude -
                               detail::log_factorial(n - l) - detail::log_factorial(n - m) +
                               power * log_base;
        int sign = hl.sign * hm.sign;
        if (base_sign < 0 && power % 2 != 0) sign = -sign;
        acc += static_cast<double>(sign) * std::exp(log_mag) * detail::i_pow(l - m) *
               std::conj(k.q[static_cast<std::size_t>(l)]) * k.q[static_cast<std::size_t>(m)];
      }
    }
    rec.distribution[static_cast<std::size_t>(n)] = std::max(0.0, scale * acc.real());
  }
  return rec;
}

}  // namespace heralded
