#pragma once

// Brute-force reference computations. These deliberately share no code paths
// with the library routines they check: membership is decided from the n side,
// primes come from a plain sieve, sums are nested loops.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

namespace pstrident::oracle {

/// Primality table for 0..n by the plain sieve of Eratosthenes.
inline std::vector<bool> prime_table(std::uint64_t n) {
  std::vector<bool> is(n + 1, true);
  is[0] = false;
  if (n >= 1) is[1] = false;
  for (std::uint64_t i = 2; i * i <= n; ++i) {
    if (!is[i]) continue;
    for (std::uint64_t j = i * i; j <= n; j += i) is[j] = false;
  }
  return is;
}

/// floor(n^(1/gamma)) with gamma taken as the exact binary value of the
/// double. Near-integer results are recomputed at 50 and then 100 digits.
inline std::uint64_t floor_root_power(std::uint64_t n, double gamma) {
  const long double v = std::exp(std::log(static_cast<long double>(n)) / gamma);
  const long double r = std::nearbyint(v);
  if (std::fabs(v - r) > 1e-9L * v) return static_cast<std::uint64_t>(std::floor(v));
  using boost::multiprecision::cpp_bin_float_50;
  using boost::multiprecision::cpp_bin_float_100;
  const cpp_bin_float_50 v50 = pow(cpp_bin_float_50(n), 1 / cpp_bin_float_50(gamma));
  const cpp_bin_float_50 r50 = round(v50);
  if (abs(v50 - r50) > 1e-40 * v50) return static_cast<std::uint64_t>(floor(v50));
  const cpp_bin_float_100 v100 = pow(cpp_bin_float_100(n), 1 / cpp_bin_float_100(gamma));
  return static_cast<std::uint64_t>(floor(v100));
}

/// PS primes of type gamma up to X, enumerated from n = 1, 2, ...
inline std::vector<std::uint64_t> ps_primes_nside(std::uint64_t X, double gamma) {
  const auto is_prime = prime_table(X);
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1;; ++n) {
    const std::uint64_t m = floor_root_power(n, gamma);
    if (m > X) break;
    if (is_prime[m] && (out.empty() || out.back() != m)) out.push_back(m);
  }
  return out;
}

struct BruteTriple {
  std::uint64_t p1, p2, p3;
};

/// Three nested loops over PS prime lists (already restricted to the range).
template <class Accept>
std::vector<BruteTriple> triples_nested(const std::vector<std::uint64_t>& t1,
                                        const std::vector<std::uint64_t>& t2,
                                        const std::vector<std::uint64_t>& t3, Accept&& accept) {
  std::vector<BruteTriple> out;
  for (auto p1 : t1) {
    for (auto p2 : t2) {
      for (auto p3 : t3) {
        if (accept(p1, p2, p3)) out.push_back({p1, p2, p3});
      }
    }
  }
  return out;
}

/// Schedule quantities recomputed in decimal floating point with 100 digits.
struct ScheduleReference {
  double X, Delta, eps, H;
};

inline ScheduleReference schedule_reference(std::int64_t q0, double gamma, double theta) {
  using F = boost::multiprecision::cpp_dec_float_100;
  const F X = exp(F(13) / 6 * log(F(q0)));
  const F lx = log(X);
  const F eps = exp(((F(219) - F(220) * F(gamma)) / 208 + F(theta)) * lx);
  return {static_cast<double>(X), static_cast<double>(exp(F(-12) / 13 * lx) * lx),
          static_cast<double>(eps), static_cast<double>(lx * lx / eps)};
}

/// theta(y) = int Theta(x) e(x y) dx for an even real Theta, by composite
/// 20-point Gauss-Legendre on [0, T] with panels of width h.
template <class Transform>
double inverse_transform(Transform&& Theta, double y, double T, double h) {
  static const double nodes[10] = {
      0.0765265211334973337546404, 0.2277858511416450780804962, 0.3737060887154195606725482,
      0.5108670019508270980043641, 0.6360536807265150254528367, 0.7463319064601507926143051,
      0.8391169718222188233945291, 0.9122344282513259058677524, 0.9639719272779137912676661,
      0.9931285991850949247861224};
  static const double weights[10] = {
      0.1527533871307258506980843, 0.1491729864726037467878287, 0.1420961093183820513292983,
      0.1316886384491766268984945, 0.1181945319615184173123774, 0.1019301198172404350367501,
      0.0832767415767047487247581, 0.0626720483341090635695065, 0.0406014298003869413310400,
      0.0176140071391521183118620};
  long double acc = 0.0L;
  const auto panels = static_cast<std::size_t>(std::ceil(T / h));
  const double step = T / static_cast<double>(panels);
  for (std::size_t i = 0; i < panels; ++i) {
    const double mid = (static_cast<double>(i) + 0.5) * step;
    for (int g = 0; g < 10; ++g) {
      for (double s : {-1.0, 1.0}) {
        const double x = mid + s * 0.5 * step * nodes[g];
        acc += 0.5L * step * weights[g] * Theta(x) * std::cos(2.0 * std::numbers::pi * x * y);
      }
    }
  }
  return static_cast<double>(2.0L * acc);
}

}  // namespace pstrident::oracle
