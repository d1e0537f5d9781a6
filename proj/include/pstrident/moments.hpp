#pragma once

// Exact moment machinery for S(t) = sum_{p in P} e(t p^4).
//
// By orthogonality, int_0^1 |S(t)|^(2m) dt = sum_s r_m(s)^2 where r_m(s) is
// the number of ordered m-tuples from P with p_1^4 + ... + p_m^4 = s. The
// Fourier coefficients of |S|^2, |S|^4, |S|^8 (the b-type spectra) and their
// shifted-difference counterparts (the c-type spectra) are integer-keyed
// counters, stored as sorted (key, count) runs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pstrident/errors.hpp"
#include "pstrident/expsums.hpp"
#include "pstrident/numeric.hpp"
#include "pstrident/parallel.hpp"
#include "pstrident/ps_primes.hpp"

namespace pstrident {

enum class SpectrumOrder { Sums, B, C, BStar, CStar, BBar, CBar };

inline const char* to_string(SpectrumOrder o) {
  switch (o) {
    case SpectrumOrder::Sums: return "sums";
    case SpectrumOrder::B: return "b";
    case SpectrumOrder::C: return "c";
    case SpectrumOrder::BStar: return "b*";
    case SpectrumOrder::CStar: return "c*";
    case SpectrumOrder::BBar: return "bbar";
    case SpectrumOrder::CBar: return "cbar";
  }
  return "?";
}

struct SpectrumEntry {
  i128 key = 0;
  std::uint64_t count = 0;
};

/// Sparse j -> count map; keys strictly increasing, counts >= 1.
struct SpectrumMap {
  SpectrumOrder order = SpectrumOrder::Sums;
  std::vector<SpectrumEntry> entries;

  std::uint64_t at(i128 key) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), key,
                               [](const SpectrumEntry& e, i128 k) { return e.key < k; });
    return it != entries.end() && it->key == key ? it->count : 0;
  }
  u128 total() const {
    u128 s = 0;
    for (const auto& e : entries) s += e.count;
    return s;
  }
  std::size_t size() const { return entries.size(); }
};

/// A set of primes with frequencies p^4.
struct PrimeSet {
  std::vector<std::uint64_t> primes;  // sorted, distinct
  std::size_t size() const { return primes.size(); }
};

inline PrimeSet prime_set_upto(double X, const GammaType& gamma, const Exec& exec = {}) {
  return {ps_primes_upto(X, gamma, exec)};
}

inline PrimeSet prime_set_of_size(std::size_t n, const GammaType& gamma, const Exec& exec = {}) {
  return {first_ps_primes(n, gamma, exec)};
}

/// Pair-product budget for spectrum constructions.
inline constexpr std::uint64_t kMaxSpectrumPairs = 200'000'000;
/// Largest |P| for the cbar spectrum and the 16th moment.
inline constexpr std::size_t kMaxCBarSize = 60;
inline constexpr std::size_t kMaxSixteenthSize = 12;

namespace detail {

inline i128 checked_mul(i128 a, i128 b) {
  i128 r;
  require(!__builtin_mul_overflow(a, b, &r), ErrorKind::Overflow, "spectrum key overflow");
  return r;
}

inline std::uint64_t checked_count(u128 c) {
  require(c <= std::numeric_limits<std::uint64_t>::max(), ErrorKind::Overflow,
          "spectrum count overflow");
  return static_cast<std::uint64_t>(c);
}

/// Sorts (key, count) pairs and merges equal keys.
inline SpectrumMap merge_runs(std::vector<SpectrumEntry> raw, SpectrumOrder order) {
  std::sort(raw.begin(), raw.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.key < b.key; });
  SpectrumMap out;
  out.order = order;
  for (const auto& e : raw) {
    if (!out.entries.empty() && out.entries.back().key == e.key) {
      out.entries.back().count =
          checked_count(static_cast<u128>(out.entries.back().count) + e.count);
    } else {
      out.entries.push_back(e);
    }
  }
  return out;
}

inline void check_pairs(std::size_t a, std::size_t b) {
  require(static_cast<u128>(a) * b <= kMaxSpectrumPairs, ErrorKind::SizeLimit,
          "spectrum construction needs " + std::to_string(static_cast<double>(a) * b) +
              " pair products");
}

/// Convolution of two sum spectra (the spectrum of sums x + y).
inline SpectrumMap convolve(const SpectrumMap& x, const SpectrumMap& y, const Exec& exec) {
  check_pairs(x.size(), y.size());
  std::vector<std::vector<SpectrumEntry>> rows(x.size());
  parallel_for(x.size(), exec, [&](std::size_t i) {
    rows[i].reserve(y.size());
    for (const auto& e : y.entries) {
      rows[i].push_back({x.entries[i].key + e.key,
                         checked_count(static_cast<u128>(x.entries[i].count) * e.count)});
    }
  });
  std::vector<SpectrumEntry> raw;
  for (auto& r : rows) raw.insert(raw.end(), r.begin(), r.end());
  return merge_runs(std::move(raw), SpectrumOrder::Sums);
}

/// Spectrum of differences x - y for x, y drawn from one sum spectrum.
inline SpectrumMap difference(const SpectrumMap& r, SpectrumOrder order, const Exec& exec) {
  check_pairs(r.size(), r.size());
  std::vector<std::vector<SpectrumEntry>> rows(r.size());
  parallel_for(r.size(), exec, [&](std::size_t i) {
    rows[i].reserve(r.size());
    for (const auto& e : r.entries) {
      rows[i].push_back({r.entries[i].key - e.key,
                         checked_count(static_cast<u128>(r.entries[i].count) * e.count)});
    }
  });
  std::vector<SpectrumEntry> raw;
  for (auto& row : rows) raw.insert(raw.end(), row.begin(), row.end());
  return merge_runs(std::move(raw), order);
}

class Membership {
 public:
  explicit Membership(const PrimeSet& P) : set_(P.primes.begin(), P.primes.end()) {}
  bool operator()(i128 v) const {
    return v > 0 && set_.count(static_cast<std::uint64_t>(v)) != 0;
  }

 private:
  std::unordered_set<std::uint64_t> set_;
};

inline void check_prime_set(const PrimeSet& P) {
  for (std::size_t i = 0; i < P.size(); ++i) {
    require(i == 0 || P.primes[i - 1] < P.primes[i], ErrorKind::Invariant,
            "prime set must be sorted and distinct");
  }
  if (!P.primes.empty()) {
    require(P.primes.back() < (1ull << 24), ErrorKind::Overflow, "primes too large for spectra");
  }
}

}  // namespace detail

/// r_m: counts of ordered m-tuples by their sum of fourth powers; m in {1,2,4,8}.
inline SpectrumMap sum_spectrum(const PrimeSet& P, int m, const Exec& exec = {}) {
  require(m == 1 || m == 2 || m == 4 || m == 8, ErrorKind::Config, "order must be 1, 2, 4 or 8");
  detail::check_prime_set(P);
  std::vector<SpectrumEntry> raw;
  for (auto p : P.primes) raw.push_back({static_cast<i128>(ipow(p, 4)), 1});
  SpectrumMap r = detail::merge_runs(std::move(raw), SpectrumOrder::Sums);
  for (int have = 1; have < m; have *= 2) r = detail::convolve(r, r, exec);
  return r;
}

/// b-type spectrum of |S|^(2m): counts of p_1^4+..+p_m^4 - (q_1^4+..+q_m^4) = j.
inline SpectrumMap spectrum_b(const PrimeSet& P, int m, const Exec& exec = {}) {
  require(m == 1 || m == 2 || m == 4, ErrorKind::Config, "spectrum_b order must be 1, 2 or 4");
  const SpectrumOrder order =
      m == 1 ? SpectrumOrder::B : (m == 2 ? SpectrumOrder::BStar : SpectrumOrder::BBar);
  if (P.primes.empty()) return {order, {}};
  return detail::difference(sum_spectrum(P, m, exec), order, exec);
}

/// c_j: pairs (p, k) with p, p+k in P and k (4p^3 + 6p^2 k + 4p k^2 + k^3) = j.
inline SpectrumMap spectrum_c(const PrimeSet& P, const Exec& exec = {}) {
  detail::check_prime_set(P);
  const std::size_t n = P.size();
  std::vector<std::vector<SpectrumEntry>> rows(n);
  parallel_for(n, exec, [&](std::size_t i) {
    const i128 p = P.primes[i];
    for (auto q : P.primes) {
      const i128 k = static_cast<i128>(q) - p;
      const i128 inner = 4 * p * p * p + 6 * p * p * k + 4 * p * k * k + k * k * k;
      rows[i].push_back({detail::checked_mul(k, inner), 1});
    }
  });
  std::vector<SpectrumEntry> raw;
  for (auto& r : rows) raw.insert(raw.end(), r.begin(), r.end());
  return detail::merge_runs(std::move(raw), SpectrumOrder::C);
}

/// c*_j: triples (p, k1, k2) with p, p+k1, p+k2, p+k1+k2 in P and
/// 2 k1 k2 (6p^2 + 6p k1 + 6p k2 + 2k1^2 + 3k1 k2 + 2k2^2) = j.
inline SpectrumMap spectrum_c_star(const PrimeSet& P, const Exec& exec = {}) {
  detail::check_prime_set(P);
  const detail::Membership in(P);
  const std::size_t n = P.size();
  std::vector<std::vector<SpectrumEntry>> rows(n);
  parallel_for(n, exec, [&](std::size_t i) {
    const i128 p = P.primes[i];
    for (auto q1 : P.primes) {
      const i128 k1 = static_cast<i128>(q1) - p;
      for (auto q2 : P.primes) {
        const i128 k2 = static_cast<i128>(q2) - p;
        if (!in(p + k1 + k2)) continue;
        const i128 quad = 6 * p * p + 6 * p * k1 + 6 * p * k2 + 2 * k1 * k1 + 3 * k1 * k2 +
                          2 * k2 * k2;
        rows[i].push_back({detail::checked_mul(2 * k1 * k2, quad), 1});
      }
    }
  });
  std::vector<SpectrumEntry> raw;
  for (auto& r : rows) raw.insert(raw.end(), r.begin(), r.end());
  return detail::merge_runs(std::move(raw), SpectrumOrder::CStar);
}

/// cbar_j: quadruples (p, k1, k2, k3) with all eight points p + (subset sums
/// of k1, k2, k3) in P and 12 k1 k2 k3 (2p + k1 + k2 + k3) = j. O(|P|^4).
inline SpectrumMap spectrum_c_bar(const PrimeSet& P, const Exec& exec = {}) {
  detail::check_prime_set(P);
  require(P.size() <= kMaxCBarSize, ErrorKind::SizeLimit,
          "cbar spectrum limited to |P| <= " + std::to_string(kMaxCBarSize));
  const detail::Membership in(P);
  const std::size_t n = P.size();
  std::vector<std::vector<SpectrumEntry>> rows(n);
  parallel_for(n, exec, [&](std::size_t i) {
    const i128 p = P.primes[i];
    for (auto q1 : P.primes) {
      const i128 k1 = static_cast<i128>(q1) - p;
      for (auto q2 : P.primes) {
        const i128 k2 = static_cast<i128>(q2) - p;
        if (!in(p + k1 + k2)) continue;
        for (auto q3 : P.primes) {
          const i128 k3 = static_cast<i128>(q3) - p;
          if (!in(p + k1 + k3) || !in(p + k2 + k3) || !in(p + k1 + k2 + k3)) continue;
          const i128 key = detail::checked_mul(12 * k1 * k2 * k3, 2 * p + k1 + k2 + k3);
          rows[i].push_back({key, 1});
        }
      }
    }
  });
  std::vector<SpectrumEntry> raw;
  for (auto& r : rows) raw.insert(raw.end(), r.begin(), r.end());
  return detail::merge_runs(std::move(raw), SpectrumOrder::CBar);
}

/// sum_j x_j y_j over the common keys of two spectra.
inline u128 spectrum_dot(const SpectrumMap& x, const SpectrumMap& y) {
  u128 acc = 0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x.entries[i].key < y.entries[j].key) {
      ++i;
    } else if (y.entries[j].key < x.entries[i].key) {
      ++j;
    } else {
      acc += static_cast<u128>(x.entries[i].count) * y.entries[j].count;
      ++i;
      ++j;
    }
  }
  return acc;
}

/// int_0^1 |S(t)|^(2m) dt = sum_s r_m(s)^2, in exact integer arithmetic.
inline std::uint64_t exact_moment(const PrimeSet& P, int m, const Exec& exec = {}) {
  require(m == 1 || m == 2 || m == 4 || m == 8, ErrorKind::Config, "order must be 1, 2, 4 or 8");
  if (m == 8) {
    require(P.size() <= kMaxSixteenthSize, ErrorKind::SizeLimit,
            "16th moment limited to |P| <= " + std::to_string(kMaxSixteenthSize));
  }
  if (P.primes.empty()) return 0;
  const SpectrumMap r = sum_spectrum(P, m, exec);
  u128 acc = 0;
  for (const auto& e : r.entries) {
    const u128 sq = static_cast<u128>(e.count) * e.count;
    require(acc + sq >= acc, ErrorKind::Overflow, "moment overflow");
    acc += sq;
  }
  return detail::checked_count(acc);
}

/// Largest M (number of sample points) quadrature_moment accepts.
inline constexpr std::uint64_t kMaxQuadratureSamples = 4'000'000'000;

namespace detail {

inline double int_power(double x, int m) {
  double r = 1.0;
  for (; m > 0; m >>= 1, x *= x) {
    if (m & 1) r *= x;
  }
  return r;
}

}  // namespace detail

/// (1/M) sum_{i<M} |S(i/M)|^(2m). The frequencies of |S|^(2m) lie in
/// [-m D, m D] with D = (max p)^4 - (min p)^4, so any M > m D is exact up to
/// rounding; the default is M = m D + 1. Since |S(t)| = |S(1 - t)| only
/// i <= M/2 is evaluated.
inline double quadrature_moment(const PrimeSet& P, int m, std::uint64_t samples = 0,
                                const Exec& exec = {}) {
  require(m >= 1, ErrorKind::Config, "order must be positive");
  if (P.primes.empty()) return 0.0;
  const SumTable table = table_from_set(P.primes);
  const auto span = static_cast<u128>(table.freqs.back() - table.freqs.front());
  const u128 alias_free = static_cast<u128>(m) * span;
  const u128 M128 = samples == 0 ? alias_free + 1 : samples;
  require(M128 > alias_free, ErrorKind::Config,
          "sample count must exceed m ((max p)^4 - (min p)^4)");
  require(M128 <= kMaxQuadratureSamples, ErrorKind::SizeLimit,
          "quadrature moment needs too many sample points");
  const auto M = static_cast<std::uint64_t>(M128);
  const std::uint64_t half = (M - 1) / 2;  // i = 1..half mirrored, plus i = 0 (and M/2 if even)
  const double dt = 1.0 / static_cast<double>(M);
  constexpr std::size_t kBlock = 1u << 16;
  const std::size_t count = half + 1;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks);
  parallel_for(blocks, exec, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t n = std::min<std::uint64_t>(count, lo + kBlock) - lo;
    std::vector<cplx> values(n);
    sweep_sum(table, static_cast<double>(lo) * dt, dt, n, values);
    std::vector<double> powers(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double mult = (lo + i == 0) ? 1.0 : 2.0;
      powers[i] = mult * detail::int_power(std::norm(values[i]), m);
    }
    partial[b] = pairwise_sum(powers);
  });
  double total = pairwise_sum(partial);
  if (M % 2 == 0) {
    total += detail::int_power(std::norm(eval_sum(table, 0.5)), m);
  }
  return total / static_cast<double>(M);
}

struct ScalingRow {
  std::size_t set_size = 0;
  std::uint64_t largest_prime = 0;
  std::uint64_t moment4 = 0;                  // int |S|^4
  std::optional<std::uint64_t> moment8;       // int |S|^8
  std::optional<std::uint64_t> moment16;      // int |S|^16, |P| <= 12
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  std::optional<double> slope4;  // log-log least-squares slope of moment4 against |P|
  std::optional<double> slope8;
};

/// Least-squares slope of log y against log x.
inline double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size() && xs.size() >= 2, ErrorKind::Invariant,
          "slope needs at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// Moments of prefixes of the PS primes of type gamma with the given sizes.
/// The 8th-power moment is computed when |P| <= max_size_m8, the 16th when
/// |P| <= 12. Slopes are reported, never asserted.
inline ScalingReport scaling_report(const GammaType& gamma, std::span<const std::size_t> sizes,
                                    std::size_t max_size_m8 = kMaxCBarSize,
                                    const Exec& exec = {}) {
  ScalingReport report;
  if (sizes.empty()) return report;
  const std::size_t largest = *std::max_element(sizes.begin(), sizes.end());
  const auto all = first_ps_primes(largest, gamma, exec);
  std::vector<double> x4, y4, x8, y8;
  for (auto n : sizes) {
    require(n >= 1, ErrorKind::Config, "set sizes must be positive");
    PrimeSet P{std::vector<std::uint64_t>(all.begin(), all.begin() + static_cast<long>(n))};
    ScalingRow row;
    row.set_size = n;
    row.largest_prime = P.primes.back();
    row.moment4 = exact_moment(P, 2, exec);
    x4.push_back(static_cast<double>(n));
    y4.push_back(static_cast<double>(row.moment4));
    if (n <= max_size_m8) {
      row.moment8 = exact_moment(P, 4, exec);
      x8.push_back(static_cast<double>(n));
      y8.push_back(static_cast<double>(*row.moment8));
    }
    if (n <= kMaxSixteenthSize) row.moment16 = exact_moment(P, 8, exec);
    report.rows.push_back(row);
  }
  if (x4.size() >= 2) report.slope4 = loglog_slope(x4, y4);
  if (x8.size() >= 2) report.slope8 = loglog_slope(x8, y8);
  return report;
}

}  // namespace pstrident
