#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pstrident/errors.hpp"
#include "pstrident/real_expr.hpp"

namespace pstrident {

struct Convergent {
  std::int64_t a = 0;  // numerator
  std::int64_t q = 1;  // denominator, positive
  friend bool operator==(const Convergent&, const Convergent&) = default;
};

struct CfResult {
  std::vector<Convergent> convergents;
  std::vector<std::int64_t> partial_quotients;
  bool rational_terminated = false;  // the value is rational and its expansion ended early
};

namespace detail {

inline std::int64_t checked_i64(const BigInt& v) {
  require(v >= std::numeric_limits<std::int64_t>::min() &&
              v <= std::numeric_limits<std::int64_t>::max(),
          ErrorKind::Overflow, "convergent does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

inline BigInt floor_of(const BigRational& r) {
  const BigInt n = boost::multiprecision::numerator(r);
  const BigInt d = boost::multiprecision::denominator(r);  // positive
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

}  // namespace detail

/// First n convergents of every real inside the enclosure x. A partial
/// quotient is emitted only when it is the same for both ends of the
/// enclosure; otherwise PrecisionExhausted.
inline CfResult cf_convergents(const HighPrecisionReal& x, int n) {
  require(n >= 1, ErrorKind::Invariant, "cf_convergents needs n >= 1");
  require(x.lo <= x.hi, ErrorKind::Invariant, "empty enclosure");
  CfResult out;
  BigRational lo = x.lo, hi = x.hi;
  BigInt h_prev = 1, h_prev2 = 0;  // numerators p_{-1}, p_{-2}
  BigInt k_prev = 0, k_prev2 = 1;  // denominators q_{-1}, q_{-2}
  for (int i = 0; i < n; ++i) {
    const BigInt a = detail::floor_of(lo);
    if (detail::floor_of(hi) != a) {
      throw Error(ErrorKind::PrecisionExhausted,
                  "partial quotient " + std::to_string(i) + " not certified by the enclosure");
    }
    const BigInt h = a * h_prev + h_prev2;
    const BigInt k = a * k_prev + k_prev2;
    out.partial_quotients.push_back(detail::checked_i64(a));
    out.convergents.push_back({detail::checked_i64(h), detail::checked_i64(k)});
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const BigRational frac_lo = lo - a;
    const BigRational frac_hi = hi - a;
    if (frac_lo == 0) {
      if (frac_hi == 0) {
        out.rational_terminated = i + 1 < n;
        return out;
      }
      if (i + 1 < n) {
        throw Error(ErrorKind::PrecisionExhausted,
                    "enclosure touches an integer at quotient " + std::to_string(i));
      }
      return out;
    }
    lo = 1 / frac_hi;
    hi = 1 / frac_lo;
  }
  return out;
}

/// Convergents of a parsed real. Symbolic values start with max(4n, 32)
/// digits and double the precision up to three times when certification runs
/// out; literals are used at the precision they were written with.
inline CfResult cf_convergents(const RealExpr& x, int n) {
  int digits = std::max(4 * n, 32);
  for (int attempt = 0;; ++attempt) {
    try {
      return cf_convergents(x.enclose(digits), n);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PrecisionExhausted || !x.symbolic() || attempt == 3) throw;
      digits *= 2;
    }
  }
}

}  // namespace pstrident
