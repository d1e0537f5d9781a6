#pragma once

// The generating functions of the circle-method setup:
//
//   S_k(t)   = sum_{lambda0 X < p^k <= X, p PS} p^(1-gamma) e(t p^k) log p
//   Sigma(t) = sum_{lambda0 X < p^4 <= X} e(t p^4) log p
//   U(t)     = sum_{lambda0 X < n^4 <= X} e(t n^4)
//   Omega(t) = sum_{lambda0 X < p^4 <= X} p^(1-gamma)
//                 (psi(-(p+1)^gamma) - psi(-p^gamma)) e(t p^4) log p
//   I_k(t)   = int_{(lambda0 X)^(1/k)}^{X^(1/k)} e(t y^k) dy
//
// Every sum is held as a table of integer frequencies and real coefficients.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pstrident/errors.hpp"
#include "pstrident/numeric.hpp"
#include "pstrident/parallel.hpp"
#include "pstrident/ps_primes.hpp"
#include "pstrident/quadrature.hpp"

namespace pstrident {

using cplx = std::complex<double>;

enum class SumKind { S, Sigma, U, Omega };

struct ExpSumSpec {
  SumKind kind = SumKind::S;
  int k = 4;
  double X = 0.0;
  double lambda0 = 0.0;
  std::optional<GammaType> gamma;
};

/// Trigonometric polynomial sum_i coef_i e(t freq_i).
struct SumTable {
  std::vector<std::int64_t> freqs;
  std::vector<double> coefs;

  bool empty() const { return freqs.empty(); }
  std::size_t size() const { return freqs.size(); }
  double coef_sum() const { return pairwise_sum(coefs); }
  std::int64_t max_abs_freq() const {
    std::int64_t m = 0;
    for (auto f : freqs) m = std::max(m, f < 0 ? -f : f);
    return m;
  }
};

inline SumTable table_from_ps(const PsPrimeTable& t) {
  SumTable out;
  out.coefs = t.weights;
  for (auto p : t.primes) out.freqs.push_back(static_cast<std::int64_t>(ipow(p, t.k)));
  return out;
}

/// Unweighted sum over a prime set with frequencies p^4.
inline SumTable table_from_set(std::span<const std::uint64_t> primes) {
  SumTable out;
  for (auto p : primes) {
    out.freqs.push_back(static_cast<std::int64_t>(ipow(p, 4)));
    out.coefs.push_back(1.0);
  }
  return out;
}

/// psi(-v) for a certified power v: {-v} - 1/2 = 1/2 - {v} (v is never an integer).
inline double psi_of_negated(const CertifiedPower& v) { return 0.5 - v.frac; }

inline SumTable build_sum_table(const ExpSumSpec& spec, const Exec& exec = {}) {
  require(spec.X >= 1.0, ErrorKind::Config, "X must be at least 1");
  require(spec.lambda0 > 0.0 && spec.lambda0 < 1.0, ErrorKind::Config,
          "lambda0 must lie in (0,1)");
  const bool needs_gamma = spec.kind == SumKind::S || spec.kind == SumKind::Omega;
  require(needs_gamma == spec.gamma.has_value(), ErrorKind::Config,
          "gamma is required for S and Omega and meaningless otherwise");
  if (spec.kind == SumKind::S) {
    if (spec.X < 2.0) return {};
    return table_from_ps(sieve_ps_table(spec.X, spec.lambda0, spec.k, *spec.gamma, exec));
  }
  require(spec.k == 4, ErrorKind::Config, "Sigma, U and Omega are fourth-power sums");
  const auto [lo, hi] = power_range(spec.lambda0 * spec.X, spec.X, 4);
  SumTable out;
  if (lo > hi) return out;
  if (spec.kind == SumKind::U) {
    for (std::uint64_t n = lo; n <= hi; ++n) {
      out.freqs.push_back(static_cast<std::int64_t>(ipow(n, 4)));
      out.coefs.push_back(1.0);
    }
    return out;
  }
  for (auto p : primes_in_range(lo, hi, exec)) {
    const double logp = std::log(static_cast<double>(p));
    double coef = logp;
    if (spec.kind == SumKind::Omega) {
      const double g = spec.gamma->value();
      const auto vp = certified_power(p, g);
      const auto vq = certified_power(p + 1, g);
      coef = std::pow(static_cast<double>(p), 1.0 - g) * (psi_of_negated(vq) - psi_of_negated(vp)) *
             logp;
    }
    out.freqs.push_back(static_cast<std::int64_t>(ipow(p, 4)));
    out.coefs.push_back(coef);
  }
  return out;
}

/// The exact finite sum at t, reduced pairwise in a fixed order.
inline cplx eval_sum(const SumTable& table, double t, const Exec& exec = {}) {
  return chunked_sum<cplx>(table.size(), exec, [&](std::size_t i) {
    return table.coefs[i] * unit_exp_mul(t, table.freqs[i]);
  });
}

struct SumValue {
  cplx value;
  bool range_empty = false;
};

inline SumValue eval_sum(const ExpSumSpec& spec, double t, const Exec& exec = {}) {
  const auto table = build_sum_table(spec, exec);
  return {eval_sum(table, t, exec), table.empty()};
}

/// Values of the sum at t0 + i*dt for i in [0, count), written to out.
/// Phases advance by complex rotation and are re-synchronised from the exact
/// phase every kResync steps; blocks of kSweepBlock nodes are independent, so
/// the result does not depend on the thread count.
inline void sweep_sum(const SumTable& table, double t0, double dt, std::size_t count,
                      std::span<cplx> out, const Exec& exec = {}) {
  constexpr std::size_t kSweepBlock = 8192;
  constexpr std::size_t kResync = 256;
  require(out.size() >= count, ErrorKind::Invariant, "sweep output too small");
  const std::size_t blocks = (count + kSweepBlock - 1) / kSweepBlock;
  // Phasors are kept pre-multiplied by their coefficients, as split real and
  // imaginary arrays padded to a multiple of kLanes; each lane accumulates
  // separately so the update over j vectorises, and the lanes are combined
  // in a fixed order.
  constexpr std::size_t kLanes = 4;
  const std::size_t n = table.size();
  const std::size_t padded = (n + kLanes - 1) / kLanes * kLanes;
  std::vector<double> step_re(padded, 1.0), step_im(padded, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx s = unit_exp_mul(dt, table.freqs[j]);
    step_re[j] = s.real();
    step_im[j] = s.imag();
  }
  parallel_for(blocks, exec, [&](std::size_t b) {
    const std::size_t lo = b * kSweepBlock;
    const std::size_t hi = std::min(count, lo + kSweepBlock);
    std::vector<double> zr(padded, 0.0), zi(padded, 0.0);
    for (std::size_t i = lo; i < hi; ++i) {
      if ((i - lo) % kResync == 0) {
        const double t = t0 + static_cast<double>(i) * dt;
        for (std::size_t j = 0; j < n; ++j) {
          const cplx z = table.coefs[j] * unit_exp_mul(t, table.freqs[j]);
          zr[j] = z.real();
          zi[j] = z.imag();
        }
      }
      double lane_re[kLanes] = {}, lane_im[kLanes] = {};
      double* __restrict pr = zr.data();
      double* __restrict pi = zi.data();
      const double* __restrict sr = step_re.data();
      const double* __restrict si = step_im.data();
      for (std::size_t j = 0; j < padded; j += kLanes) {
        for (std::size_t l = 0; l < kLanes; ++l) {
          const double xr = pr[j + l], xi = pi[j + l];
          lane_re[l] += xr;
          lane_im[l] += xi;
          pr[j + l] = xr * sr[j + l] - xi * si[j + l];
          pi[j + l] = xr * si[j + l] + xi * sr[j + l];
        }
      }
      const double re = (lane_re[0] + lane_re[1]) + (lane_re[2] + lane_re[3]);
      const double im = (lane_im[0] + lane_im[1]) + (lane_im[2] + lane_im[3]);
      out[i] = {re, im};
    }
  });
}

/// I_k(t) through u = y^k: (1/k) int u^(1/k - 1) e(t u) du, composite
/// Gauss-Kronrod with panels no longer than 1/(8|t|) and bisection wherever
/// the embedded Gauss estimate disagrees. Absolute error target
/// 1e-9 (X^(1/k) - (lambda0 X)^(1/k)).
inline cplx eval_I(int k, double t, double X, double lambda0) {
  require(k >= 1 && k <= 4, ErrorKind::Config, "I_k needs k in 1..4");
  require(X >= 1.0 && lambda0 > 0.0 && lambda0 < 1.0, ErrorKind::Config,
          "I_k needs X >= 1 and lambda0 in (0,1)");
  const double u_lo = lambda0 * X;
  const double u_hi = X;
  const double y_span = std::pow(u_hi, 1.0 / k) - std::pow(u_lo, 1.0 / k);
  if (t == 0.0) return {y_span, 0.0};
  const double tol = 1e-9 * y_span;
  const auto& rule = gauss_kronrod15();
  const double inv_k = 1.0 / k;

  auto panel = [&](double a, double b, cplx& kron, cplx& gauss) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    kron = gauss = {};
    for (std::size_t i = 0; i < rule.kronrod.size(); ++i) {
      const double u = mid + half * rule.kronrod.nodes[i];
      const cplx f = std::pow(u, inv_k - 1.0) * unit_exp(t * u);
      kron += rule.kronrod.weights[i] * f;
      gauss += rule.gauss_weights[i] * f;
    }
    kron *= half * inv_k;
    gauss *= half * inv_k;
  };

  const double max_len = 1.0 / (8.0 * std::abs(t));
  const auto panels = static_cast<std::size_t>(std::ceil((u_hi - u_lo) / max_len));
  const double len = (u_hi - u_lo) / static_cast<double>(std::max<std::size_t>(panels, 1));
  const double panel_tol = tol * len / (u_hi - u_lo);

  std::vector<cplx> parts;
  parts.reserve(panels);
  struct Pending {
    double a, b, tol;
    int depth;
  };
  std::vector<Pending> stack;
  for (std::size_t p = 0; p < std::max<std::size_t>(panels, 1); ++p) {
    const double a = u_lo + len * static_cast<double>(p);
    const double b = p + 1 == panels ? u_hi : a + len;
    stack.push_back({a, b, panel_tol, 0});
    while (!stack.empty()) {
      const Pending cur = stack.back();
      stack.pop_back();
      cplx kron, gauss;
      panel(cur.a, cur.b, kron, gauss);
      if (std::abs(kron - gauss) <= cur.tol || cur.depth >= 30) {
        parts.push_back(kron);
      } else {
        const double m = 0.5 * (cur.a + cur.b);
        stack.push_back({m, cur.b, 0.5 * cur.tol, cur.depth + 1});
        stack.push_back({cur.a, m, 0.5 * cur.tol, cur.depth + 1});
      }
    }
  }
  return pairwise_sum(parts);
}

/// Pieces of S_4(t) = mainterm + omega, exact term by term, because
/// [-p^g] - [-(p+1)^g] = ((p+1)^g - p^g) + psi(-(p+1)^g) - psi(-p^g).
struct S4Decomposition {
  cplx s4;             // S_4(t) over PS primes
  cplx mainterm;       // sum p^(1-g) ((p+1)^g - p^g) e(t p^4) log p over all primes
  cplx omega;          // Omega(t)
  cplx residual;       // s4 - mainterm - omega, zero up to rounding
  cplx taylor_gap;     // mainterm - gamma Sigma(t)
  double weight_scale = 0.0;  // sum over all primes in range of p^(1-g) log p
  bool range_empty = false;
};

inline S4Decomposition decompose_S4(double t, double X, double lambda0, const GammaType& gamma,
                                    const Exec& exec = {}) {
  require(X >= 1.0 && lambda0 > 0.0 && lambda0 < 1.0, ErrorKind::Config,
          "decompose_S4 needs X >= 1 and lambda0 in (0,1)");
  const double g = gamma.value();
  const auto [lo, hi] = power_range(lambda0 * X, X, 4);
  S4Decomposition out;
  if (lo > hi) {
    out.range_empty = true;
    return out;
  }
  const auto primes = primes_in_range(lo, hi, exec);
  out.range_empty = primes.empty();
  std::vector<cplx> s4(primes.size()), main(primes.size()), omega(primes.size()),
      sigma(primes.size());
  std::vector<double> scale(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const auto p = primes[i];
    const double pd = static_cast<double>(p);
    const double logp = std::log(pd);
    const double w = std::pow(pd, 1.0 - g) * logp;
    const auto vp = certified_power(p, g);
    const auto vq = certified_power(p + 1, g);
    const cplx e = unit_exp_mul(t, static_cast<std::int64_t>(ipow(p, 4)));
    const double gap = std::pow(pd, g) * std::expm1(g * std::log1p(1.0 / pd));
    const double indicator = static_cast<double>(vq.floor - vp.floor);
    s4[i] = indicator * w * e;
    main[i] = gap * w * e;
    omega[i] = (psi_of_negated(vq) - psi_of_negated(vp)) * w * e;
    sigma[i] = logp * e;
    scale[i] = w;
  }
  out.s4 = pairwise_sum(s4);
  out.mainterm = pairwise_sum(main);
  out.omega = pairwise_sum(omega);
  out.residual = out.s4 - out.mainterm - out.omega;
  out.taylor_gap = out.mainterm - g * pairwise_sum(sigma);
  out.weight_scale = pairwise_sum(scale);
  return out;
}

/// |I_4(t) - U(t)| / (1 + |t| X).
inline double euler_gap(double t, double X, double lambda0, const Exec& exec = {}) {
  ExpSumSpec spec{SumKind::U, 4, X, lambda0, std::nullopt};
  const cplx u = eval_sum(build_sum_table(spec, exec), t, exec);
  const cplx integral = eval_I(4, t, X, lambda0);
  return std::abs(integral - u) / (1.0 + std::abs(t) * X);
}

}  // namespace pstrident
