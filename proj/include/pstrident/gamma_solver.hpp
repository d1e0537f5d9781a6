#pragma once

// Parameter schedule, the weighted triple count Gamma(X), its Fourier-side
// decomposition, the main term B(X) and explicit solution triples of
//
//   |lambda1 p1 + lambda2 p2 + lambda3 p3^4 + eta| < tol.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pstrident/errors.hpp"
#include "pstrident/expsums.hpp"
#include "pstrident/numeric.hpp"
#include "pstrident/parallel.hpp"
#include "pstrident/ps_primes.hpp"
#include "pstrident/quadrature.hpp"
#include "pstrident/real_expr.hpp"
#include "pstrident/smoothing.hpp"

namespace pstrident {

struct ProblemSpec {
  RealExpr lambda1 = RealExpr::parse("1");
  RealExpr lambda2 = RealExpr::parse("1");
  RealExpr lambda3 = RealExpr::parse("-1");
  RealExpr eta = RealExpr::parse("0");
  GammaType gamma{0.95};
  double theta_exp = 0.1;
  double lambda0 = 0.1;

  double l1() const { return lambda1.to_double(); }
  double l2() const { return lambda2.to_double(); }
  double l3() const { return lambda3.to_double(); }
  double eta_value() const { return eta.to_double(); }

  /// Checks the structural conditions; throws Config on violation.
  void validate() const {
    const double a = l1(), b = l2(), c = l3();
    require(a != 0.0 && b != 0.0 && c != 0.0, ErrorKind::Config, "lambdas must be nonzero");
    require(!((a > 0 && b > 0 && c > 0) || (a < 0 && b < 0 && c < 0)), ErrorKind::Config,
            "lambda1, lambda2, lambda3 must not all have the same sign");
    require(theta_exp > 0.0, ErrorKind::Config, "theta must be positive");
    require(lambda0 > 0.0 && lambda0 < 1.0, ErrorKind::Config, "lambda0 must lie in (0,1)");
  }

  /// True when lambda1/lambda2 is certified irrational: exactly one of the
  /// two is an irrational surd and the other is exact rational.
  bool ratio_irrational() const {
    const bool s1 = lambda1.symbolic() && !lambda1.rational();
    const bool s2 = lambda2.symbolic() && !lambda2.rational();
    return (s1 && lambda2.rational()) || (s2 && lambda1.rational());
  }

  /// min(lambda1/(4|lambda3|), lambda2/(4|lambda3|), 1/16), read literally.
  double admissibility_bound() const {
    const double d = 4.0 * std::abs(l3());
    return std::min({l1() / d, l2() / d, 1.0 / 16.0});
  }
  bool lambda0_admissible() const {
    const double b = admissibility_bound();
    return b > 0.0 && lambda0 < b;
  }
};

struct RunParams {
  std::int64_t q0 = 0;  // 0 when X was supplied directly
  double X = 0.0;
  double Delta = 0.0;
  double eps = 0.0;
  double H = 0.0;
  int smoothing_k = 1;
};

namespace detail {

using Float50 = boost::multiprecision::cpp_bin_float_50;

inline RunParams schedule_from_x(const Float50& X, std::int64_t q0, const ProblemSpec& spec) {
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  const Float50 lx = log(X);
  const Float50 g = spec.gamma.value();
  const Float50 expo = (Float50(219) - 220 * g) / 208 + Float50(spec.theta_exp);
  const Float50 eps = pow(X, expo);
  RunParams p;
  p.q0 = q0;
  p.X = static_cast<double>(X);
  p.Delta = static_cast<double>(pow(X, Float50(-12) / 13) * lx);
  p.eps = static_cast<double>(eps);
  p.H = static_cast<double>(lx * lx / eps);
  p.smoothing_k = std::max(1, static_cast<int>(std::floor(static_cast<double>(lx))));
  return p;
}

}  // namespace detail

/// X = q0^(13/6), Delta = X^(-12/13) ln X, eps = X^((219-220 gamma)/208 + theta),
/// H = (ln X)^2 / eps, smoothing_k = max(1, floor(ln X)).
inline RunParams derive_params(std::int64_t q0, const ProblemSpec& spec) {
  require(q0 >= 2, ErrorKind::Config, "q0 must be at least 2");
  using boost::multiprecision::pow;
  const detail::Float50 X = pow(detail::Float50(q0), detail::Float50(13) / 6);
  return detail::schedule_from_x(X, q0, spec);
}

/// The same schedule for a directly supplied X.
inline RunParams params_for_x(double X, const ProblemSpec& spec) {
  require(X >= 2.0 && std::isfinite(X), ErrorKind::Config, "X must be at least 2");
  return detail::schedule_from_x(detail::Float50(X), 0, spec);
}

struct TripleSolution {
  std::uint64_t p1 = 0, p2 = 0, p3 = 0;
  double value = 0.0;
  friend bool operator==(const TripleSolution&, const TripleSolution&) = default;
};

/// lambda1 p1 + lambda2 p2 + lambda3 p3^4 + eta, always evaluated in this order.
inline double triple_value(double l1, double l2, double l3, double eta, std::uint64_t p1,
                           std::uint64_t p2, std::uint64_t p3) {
  const double p34 = static_cast<double>(ipow(p3, 4));
  return l1 * static_cast<double>(p1) + l2 * static_cast<double>(p2) + l3 * p34 + eta;
}

struct TripleTables {
  PsPrimeTable t1, t2, t3;
  bool any_empty() const { return t1.empty() || t2.empty() || t3.empty(); }
};

inline TripleTables build_triple_tables(const ProblemSpec& spec, double X, const Exec& exec = {}) {
  return {sieve_ps_table(X, spec.lambda0, 1, spec.gamma, exec),
          sieve_ps_table(X, spec.lambda0, 1, spec.gamma, exec),
          sieve_ps_table(X, spec.lambda0, 4, spec.gamma, exec)};
}

namespace detail {

/// Calls visit(i1, i2, i3, value) for every triple with |value| < tol, in
/// order of i1, then i3, then ascending lambda2 p2. The per-i1 work runs in
/// parallel; visit receives the row index so callers can keep rows apart.
template <class Visit>
void for_each_window(const TripleTables& tt, const ProblemSpec& spec, double tol,
                     const Exec& exec, Visit&& visit) {
  const double l1 = spec.l1(), l2 = spec.l2(), l3 = spec.l3(), eta = spec.eta_value();
  struct Entry {
    double v;
    std::size_t idx;
  };
  std::vector<Entry> v2;
  v2.reserve(tt.t2.size());
  for (std::size_t j = 0; j < tt.t2.size(); ++j) {
    v2.push_back({l2 * static_cast<double>(tt.t2.primes[j]), j});
  }
  std::sort(v2.begin(), v2.end(), [](const Entry& a, const Entry& b) { return a.v < b.v; });
  parallel_for(tt.t1.size(), exec, [&](std::size_t i1) {
    const std::uint64_t p1 = tt.t1.primes[i1];
    for (std::size_t i3 = 0; i3 < tt.t3.size(); ++i3) {
      const std::uint64_t p3 = tt.t3.primes[i3];
      const double c = l1 * static_cast<double>(p1) + l3 * static_cast<double>(ipow(p3, 4)) + eta;
      // Widened window; membership is decided by the exact value below.
      const double slack = 1e-9 * (std::abs(c) + 1.0);
      const double lo = -c - tol - slack;
      const double hi = -c + tol + slack;
      auto it = std::lower_bound(v2.begin(), v2.end(), lo,
                                 [](const Entry& e, double x) { return e.v < x; });
      for (; it != v2.end() && it->v <= hi; ++it) {
        const double value = triple_value(l1, l2, l3, eta, p1, tt.t2.primes[it->idx], p3);
        if (std::abs(value) < tol) visit(i1, it->idx, i3, value);
      }
    }
  });
}

}  // namespace detail

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

/// Solutions sorted by (p1, p2, p3), truncated to `limit`.
inline std::vector<TripleSolution> find_triples(const ProblemSpec& spec, double X, double tol,
                                                std::size_t limit = kUnlimited,
                                                const Exec& exec = {}) {
  require(tol > 0.0, ErrorKind::Config, "tolerance must be positive");
  const TripleTables tt = build_triple_tables(spec, X, exec);
  require(!tt.any_empty(), ErrorKind::RangeEmpty, "a prime table of the triple range is empty");
  std::vector<std::vector<TripleSolution>> rows(tt.t1.size());
  detail::for_each_window(tt, spec, tol, exec,
                          [&](std::size_t i1, std::size_t i2, std::size_t i3, double value) {
                            rows[i1].push_back(
                                {tt.t1.primes[i1], tt.t2.primes[i2], tt.t3.primes[i3], value});
                          });
  std::vector<TripleSolution> out;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(), [](const TripleSolution& a, const TripleSolution& b) {
      return std::tie(a.p2, a.p3) < std::tie(b.p2, b.p3);
    });
    for (const auto& s : row) {
      if (out.size() >= limit) return out;
      out.push_back(s);
    }
  }
  return out;
}

struct GammaDirect {
  double value = 0.0;
  std::uint64_t support = 0;  // triples with |value| < eps
  bool range_empty = false;
};

/// sum over the triple range of theta(lambda1 p1 + lambda2 p2 + lambda3 p3^4 + eta)
/// times the three weights p^(1-gamma) log p.
inline GammaDirect gamma_direct(const ProblemSpec& spec, const RunParams& params,
                                const Exec& exec = {}) {
  const SmoothingKernel kernel(params.eps, params.smoothing_k);
  const TripleTables tt = build_triple_tables(spec, params.X, exec);
  GammaDirect out;
  if (tt.any_empty()) {
    out.range_empty = true;
    return out;
  }
  std::vector<std::vector<double>> rows(tt.t1.size());
  detail::for_each_window(tt, spec, params.eps, exec,
                          [&](std::size_t i1, std::size_t i2, std::size_t i3, double value) {
                            rows[i1].push_back(theta(value, kernel) * tt.t1.weights[i1] *
                                               tt.t2.weights[i2] * tt.t3.weights[i3]);
                          });
  std::vector<double> sums(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sums[i] = pairwise_sum(rows[i]);
    out.support += rows[i].size();
  }
  out.value = pairwise_sum(sums);
  return out;
}

struct GammaIntegral {
  cplx gamma1;              // |t| < Delta
  cplx gamma2;              // Delta <= |t| <= H
  double gamma3_bound = 0;  // bound on |integral over |t| > H|
  double total = 0;         // Re(gamma1 + gamma2)
  double imag = 0;          // Im(gamma1 + gamma2), zero in exact arithmetic
  std::size_t evaluations = 0;
  bool range_empty = false;

  double lower() const { return total - gamma3_bound; }
  double upper() const { return total + gamma3_bound; }
};

inline constexpr std::size_t kDefaultQuadBudget = 10'000'000;

/// Bound on the tail: |S1 S1 S4| <= W1 W2 W4 (sums of weights) and
/// int_{|t|>H} |Theta| <= (2/pi) (1/k) (4k/(pi eps H))^k.
inline double gamma3_bound(const TripleTables& tt, const RunParams& params) {
  const SmoothingKernel kernel(params.eps, params.smoothing_k);
  const double w = tt.t1.weight_sum() * tt.t2.weight_sum() * tt.t3.weight_sum();
  return w * (2.0 / std::numbers::pi) * theta_tail_mass(params.H, kernel);
}

namespace detail {

/// Composite 4-point Gauss-Legendre over [lo, hi] split into `panels` equal
/// panels. The nodes for one Gauss offset form an arithmetic progression, so
/// all three sums are swept rather than evaluated pointwise.
inline cplx integrate_segment(const SumTable& s1, const SumTable& s2, const SumTable& s4,
                              const ProblemSpec& spec, const SmoothingKernel& kernel, double lo,
                              double hi, std::size_t panels, const Exec& exec) {
  constexpr std::size_t kChunk = 1u << 16;
  const auto& rule = gauss_legendre<4>();
  const double h = (hi - lo) / static_cast<double>(panels);
  const double l1 = spec.l1(), l2 = spec.l2(), l3 = spec.l3(), eta = spec.eta_value();
  std::vector<cplx> parts;
  std::vector<cplx> a(kChunk), b(kChunk), c(kChunk), terms(kChunk);
  for (std::size_t start = 0; start < panels; start += kChunk) {
    const std::size_t n = std::min(kChunk, panels - start);
    for (std::size_t g = 0; g < rule.size(); ++g) {
      const double t0 = lo + (static_cast<double>(start) + 0.5 * (1.0 + rule.nodes[g])) * h;
      sweep_sum(s1, l1 * t0, l1 * h, n, a, exec);
      sweep_sum(s2, l2 * t0, l2 * h, n, b, exec);
      sweep_sum(s4, l3 * t0, l3 * h, n, c, exec);
      const double wg = 0.5 * h * rule.weights[g];
      for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        terms[i] = wg * theta_fourier(t, kernel) * a[i] * b[i] * c[i] * unit_exp(eta * t);
      }
      parts.push_back(pairwise_sum(std::span<const cplx>(terms.data(), n)));
    }
  }
  return pairwise_sum(parts);
}

}  // namespace detail

/// Gamma1 and Gamma2 by composite quadrature of
/// Theta(t) S1(lambda1 t) S1(lambda2 t) S4(lambda3 t) e(eta t) with panel
/// width at most 1/(8 max|lambda| X); Gamma3 replaced by its bound.
inline GammaIntegral gamma_via_integral(const ProblemSpec& spec, const RunParams& params,
                                        std::size_t quad_budget = kDefaultQuadBudget,
                                        const Exec& exec = {}) {
  const SmoothingKernel kernel(params.eps, params.smoothing_k);
  const TripleTables tt = build_triple_tables(spec, params.X, exec);
  GammaIntegral out;
  if (tt.any_empty()) {
    out.range_empty = true;
    return out;
  }
  require(params.H > params.Delta && params.Delta > 0.0, ErrorKind::Config,
          "schedule needs 0 < Delta < H");
  const double lmax = std::max({std::abs(spec.l1()), std::abs(spec.l2()), std::abs(spec.l3())});
  const double hmax = 1.0 / (8.0 * lmax * params.X);
  const auto panels_for = [&](double len) {
    return static_cast<std::size_t>(std::ceil(len / hmax));
  };
  const std::size_t n_inner = panels_for(2.0 * params.Delta);
  const std::size_t n_outer = panels_for(params.H - params.Delta);
  out.evaluations = 4 * (n_inner + 2 * n_outer);
  require(out.evaluations <= quad_budget, ErrorKind::BudgetExceeded,
          "quadrature needs " + std::to_string(out.evaluations) + " evaluations, budget " +
              std::to_string(quad_budget));

  const SumTable s1 = table_from_ps(tt.t1), s2 = table_from_ps(tt.t2), s4 = table_from_ps(tt.t3);
  const auto seg = [&](double lo, double hi, std::size_t n) {
    return detail::integrate_segment(s1, s2, s4, spec, kernel, lo, hi, n, exec);
  };
  out.gamma1 = seg(-params.Delta, params.Delta, n_inner);
  out.gamma2 = seg(-params.H, -params.Delta, n_outer) + seg(params.Delta, params.H, n_outer);
  out.gamma3_bound = gamma3_bound(tt, params);
  const cplx sum = out.gamma1 + out.gamma2;
  out.total = sum.real();
  out.imag = sum.imag();
  return out;
}

struct MainTerm {
  double B = 0.0;
  double ratio = 0.0;  // B / (eps X^(5/4))
  double error_estimate = 0.0;
  bool admissible = false;
  double admissibility_bound = 0.0;
};

namespace detail {

/// int int theta(lambda1 y1 + lambda2 y2 + c) over y1, y2 in [A, B].
inline double box_pair_integral(double l1, double l2, double A, double B, double c,
                                const SmoothingKernel& kernel) {
  const auto T2 = [&](double z) { return theta_second_antiderivative(z, kernel); };
  const double corners = T2(l1 * B + l2 * B + c) - T2(l1 * A + l2 * B + c) -
                         T2(l1 * B + l2 * A + c) + T2(l1 * A + l2 * A + c);
  return corners / (l1 * l2);
}

}  // namespace detail

/// B(X) = gamma^3 int Theta(t) I1(lambda1 t) I1(lambda2 t) I4(lambda3 t) e(eta t) dt,
/// evaluated on the real side: by Fourier inversion it equals gamma^3 times
/// the integral of theta(lambda1 y1 + lambda2 y2 + lambda3 y3^4 + eta) over
/// the box lambda0 X < y1, y2 <= X, (lambda0 X)^(1/4) < y3 <= X^(1/4). The
/// y1, y2 integrals are exact through the second antiderivative of theta;
/// y3 is integrated by Gauss-Legendre between the points where the
/// integrand changes form.
inline MainTerm main_term_B(const ProblemSpec& spec, const RunParams& params,
                            bool strict = false) {
  MainTerm out;
  out.admissibility_bound = spec.admissibility_bound();
  out.admissible = spec.lambda0_admissible();
  require(out.admissible || !strict, ErrorKind::InadmissibleLambda0,
          "lambda0 = " + std::to_string(spec.lambda0) + " is not below " +
              std::to_string(out.admissibility_bound));
  const SmoothingKernel kernel(params.eps, params.smoothing_k);
  const double l1 = spec.l1(), l2 = spec.l2(), l3 = spec.l3(), eta = spec.eta_value();
  const double A = spec.lambda0 * params.X, Bx = params.X;
  const double y_lo = std::pow(A, 0.25), y_hi = std::pow(Bx, 0.25);

  // theta_second_antiderivative is a different polynomial between the knots
  // +-a + (j - k/2) w; map every knot for each corner back to y3.
  std::vector<double> knots;
  for (int j = 0; j <= kernel.k(); ++j) {
    const double shift = (j - 0.5 * kernel.k()) * kernel.w();
    knots.push_back(kernel.a() + shift);
    knots.push_back(-kernel.a() + shift);
  }
  std::vector<double> cuts{y_lo, y_hi};
  for (double s1 : {A, Bx}) {
    for (double s2 : {A, Bx}) {
      for (double e : knots) {
        const double y4 = (e - l1 * s1 - l2 * s2 - eta) / l3;
        if (y4 <= 0.0) continue;
        const double y = std::pow(y4, 0.25);
        if (y > y_lo && y < y_hi) cuts.push_back(y);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const auto g = [&](double y3) {
    return detail::box_pair_integral(l1, l2, A, Bx, l3 * y3 * y3 * y3 * y3 + eta, kernel);
  };
  // Between cuts g is a polynomial of degree 4(k + 1) in y3, so the 64-point
  // rule is exact up to rounding for k <= 30; the 48-point rule gives the
  // error estimate. Larger k splits each segment into equal parts.
  const auto& fine = gauss_legendre<64>();
  const auto& coarse = gauss_legendre<48>();
  const int split = kernel.k() <= 30 ? 1 : 8;
  const auto apply = [&](const QuadratureRule& rule, double lo, double hi) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    long double acc = 0.0L;
    for (std::size_t n = 0; n < rule.size(); ++n) {
      acc += rule.weights[n] * g(mid + half * rule.nodes[n]);
    }
    return static_cast<double>(half * acc);
  };
  std::vector<double> parts;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    const double step = (cuts[i + 1] - cuts[i]) / split;
    for (int s = 0; s < split; ++s) {
      const double lo = cuts[i] + s * step;
      const double hi = s + 1 == split ? cuts[i + 1] : lo + step;
      const double v = apply(fine, lo, hi);
      parts.push_back(v);
      out.error_estimate += std::abs(v - apply(coarse, lo, hi));
    }
  }
  const double gm = spec.gamma.value();
  out.B = gm * gm * gm * pairwise_sum(parts);
  out.error_estimate *= gm * gm * gm;
  out.ratio = out.B / (params.eps * std::pow(params.X, 1.25));
  return out;
}

}  // namespace pstrident
