#pragma once

// Elementary functions shared by every module: the sawtooth, the unit
// exponential, floors that refuse to guess, certified real powers, and
// divisor counting.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pstrident/errors.hpp"

namespace pstrident {

using i128 = __int128;
using u128 = unsigned __int128;

/// psi(t) = {t} - 1/2, always in [-1/2, 1/2).
inline double psi(double t) {
  double frac = t - std::floor(t);
  // t slightly below an integer can round {t} up to exactly 1.
  if (frac >= 1.0) frac = std::nextafter(1.0, 0.0);
  return frac - 0.5;
}

namespace detail {

// e(r) for r in [-1/2, 1/2]; exact at multiples of 1/4.
inline std::complex<double> unit_exp_reduced(double r) {
  const double quarter = std::nearbyint(4.0 * r);
  const double f = r - 0.25 * quarter;  // exact, |f| <= 1/8
  const double angle = 2.0 * std::numbers::pi * f;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  switch ((static_cast<int>(quarter) % 4 + 4) % 4) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

}  // namespace detail

/// e(t) = exp(2 pi i t).
inline std::complex<double> unit_exp(double t) {
  return detail::unit_exp_reduced(t - std::nearbyint(t));
}

/// Fractional phase of t*f for an integer frequency, with the rounding error
/// of the product recovered by fma so that the reduction is exact to one
/// rounding even when t*f is large.
inline double phase_mod1(double t, std::int64_t f) {
  const double fd = static_cast<double>(f);
  const double prod = t * fd;
  const double err = std::fma(t, fd, -prod);
  return (prod - std::nearbyint(prod)) + err;
}

/// e(t*f) for an integer frequency f with |f| < 2^53.
inline std::complex<double> unit_exp_mul(double t, std::int64_t f) {
  const double r = phase_mod1(t, f);
  return detail::unit_exp_reduced(r - std::nearbyint(r));
}

struct GuardedReal {
  double value = 0.0;
  double guard = 0.0;  // certified absolute error radius
};

/// floor(x.value), refusing whenever an integer lies inside the guard band.
inline std::int64_t guarded_floor(const GuardedReal& x) {
  require(x.guard >= 0.0 && std::isfinite(x.value), ErrorKind::Invariant,
          "guarded_floor needs a finite value and a non-negative guard");
  const double nearest = std::nearbyint(x.value);
  if (std::abs(x.value - nearest) <= x.guard) {
    throw Error(ErrorKind::AmbiguousFloor, "integer inside guard band around value");
  }
  return static_cast<std::int64_t>(std::floor(x.value));
}

/// Floor and fractional part of base^gamma, certified by escalating precision.
struct CertifiedPower {
  std::int64_t floor = 0;
  double frac = 0.0;  // {base^gamma}, rounded to double after certification
  int level = 0;      // 0 = double, 1 = 113-bit, 2 = 50 digits, 3 = 100 digits
};

namespace detail {

template <class Real>
bool try_certify(std::uint64_t base, double gamma, const Real& rel_guard, CertifiedPower& out) {
  using std::exp;
  using std::log;
  const Real value = exp(Real(gamma) * log(Real(base)));
  const Real guard = value * rel_guard;
  const Real fl = floor(value);
  const Real below = value - fl;
  if (below <= guard || (Real(1) - below) <= guard) return false;
  out.floor = static_cast<std::int64_t>(fl);
  out.frac = static_cast<double>(below);
  return true;
}

}  // namespace detail

/// base^gamma with a certified floor. The double evaluation is trusted to
/// four ulps plus 1e-12; escalation runs through 113-bit, 50-digit and
/// 100-digit binary floats before giving up with AmbiguousFloor.
inline CertifiedPower certified_power(std::uint64_t base, double gamma) {
  namespace mp = boost::multiprecision;
  CertifiedPower out;
  {
    const double v = std::pow(static_cast<double>(base), gamma);
    const double ulp = std::nextafter(v, std::numeric_limits<double>::infinity()) - v;
    const GuardedReal g{v, std::max(1e-12, 4.0 * ulp)};
    const double nearest = std::nearbyint(v);
    if (std::abs(v - nearest) > g.guard) {
      out.floor = guarded_floor(g);
      out.frac = v - std::floor(v);
      out.level = 0;
      return out;
    }
  }
  if (detail::try_certify<mp::cpp_bin_float_quad>(
          base, gamma, mp::cpp_bin_float_quad(std::ldexp(1.0, -100)), out)) {
    out.level = 1;
    return out;
  }
  if (detail::try_certify<mp::cpp_bin_float_50>(base, gamma, mp::cpp_bin_float_50("1e-45"), out)) {
    out.level = 2;
    return out;
  }
  if (detail::try_certify<mp::cpp_bin_float_100>(base, gamma, mp::cpp_bin_float_100("1e-95"),
                                                 out)) {
    out.level = 3;
    return out;
  }
  throw Error(ErrorKind::AmbiguousFloor, "power too close to an integer after 3 escalations");
}

// ---------------------------------------------------------------------------
// Integer arithmetic: primality, factorization, divisor functions.

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact below
/// 3.3e24, which covers the whole 64-bit range.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (auto a : kBases) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

inline std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t x) { return (mul_mod(x, x, n) + c) % n; };
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    std::uint64_t r = 1;
    constexpr std::uint64_t m = 128;
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/// Prime factorization as (prime, exponent) pairs in ascending order.
inline std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) detail::factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<std::uint64_t, int>> out;
  for (auto p : primes) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

/// tau_k(|j|): ordered factorizations of |j| into k natural factors.
/// Multiplicative, with tau_k(p^e) = C(e+k-1, k-1).
inline std::uint64_t divisor_tau(i128 j, int k) {
  require(j != 0, ErrorKind::ZeroArgument, "divisor_tau of zero");
  require(k >= 2, ErrorKind::Invariant, "divisor_tau order must be at least 2");
  const u128 mag = j < 0 ? static_cast<u128>(-j) : static_cast<u128>(j);
  require(mag <= std::numeric_limits<std::uint64_t>::max(), ErrorKind::Overflow,
          "divisor_tau argument exceeds 64 bits");
  u128 result = 1;
  for (auto [p, e] : factorize(static_cast<std::uint64_t>(mag))) {
    // C(e+k-1, e) by the multiplicative formula; stays integral at each step.
    u128 binom = 1;
    for (int i = 1; i <= e; ++i) binom = binom * static_cast<u128>(k - 1 + i) / static_cast<u128>(i);
    result *= binom;
    require(result <= std::numeric_limits<std::uint64_t>::max(), ErrorKind::Overflow,
            "divisor_tau result exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

/// floor(x^(1/k)) for x >= 0, exact.
inline std::uint64_t integer_root(std::uint64_t x, int k) {
  if (x == 0 || k == 1) return x;
  auto pow_le = [&](std::uint64_t r) {
    u128 acc = 1;
    for (int i = 0; i < k; ++i) {
      acc *= r;
      if (acc > x) return false;
    }
    return true;
  };
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(x), 1.0 / k));
  while (r > 0 && !pow_le(r)) --r;
  while (pow_le(r + 1)) ++r;
  return r;
}

inline std::uint64_t ipow(std::uint64_t base, int k) {
  u128 acc = 1;
  for (int i = 0; i < k; ++i) {
    acc *= base;
    require(acc <= std::numeric_limits<std::uint64_t>::max(), ErrorKind::Overflow,
            "integer power exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace pstrident
