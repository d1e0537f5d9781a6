#pragma once

// Piatetski-Shapiro primes: primes of the form floor(n^(1/gamma)).
//
// Membership is decided on the prime side: p = floor(n^(1/gamma)) for some n
// exactly when [p^gamma, (p+1)^gamma) contains an integer, i.e. when
// floor((p+1)^gamma) > floor(p^gamma). Both floors are certified.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "pstrident/errors.hpp"
#include "pstrident/numeric.hpp"
#include "pstrident/parallel.hpp"

namespace pstrident {

class GammaType {
 public:
  explicit GammaType(double gamma) : gamma_(gamma) {
    require(gamma > 0.0 && gamma < 1.0, ErrorKind::Config,
            "gamma must lie strictly between 0 and 1");
  }
  double value() const { return gamma_; }
  /// 219/220 < gamma < 1, the range where the solvability theorem applies.
  bool in_theorem_range() const { return 219.0 < 220.0 * gamma_; }
  /// 2426/2817 < gamma < 1, the range of the asymptotic prime count.
  bool in_density_range() const { return 2426.0 < 2817.0 * gamma_; }

 private:
  double gamma_;
};

/// floor((n+1)^gamma) - floor(n^gamma); equals 1 exactly for PS integers.
inline std::int64_t ps_indicator(std::uint64_t n, const GammaType& gamma) {
  const auto lo = certified_power(n, gamma.value());
  const auto hi = certified_power(n + 1, gamma.value());
  return hi.floor - lo.floor;
}

inline bool is_ps(std::uint64_t n, const GammaType& gamma) {
  return n >= 1 && ps_indicator(n, gamma) >= 1;
}

inline bool is_ps_prime(std::uint64_t p, const GammaType& gamma) {
  return is_prime(p) && is_ps(p, gamma);
}

/// All primes in [lo, hi], in ascending order, by a segmented sieve.
inline std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi,
                                                  const Exec& exec = {}) {
  std::vector<std::uint64_t> out;
  if (hi < 2 || lo > hi) return out;
  lo = std::max<std::uint64_t>(lo, 2);

  const std::uint64_t root = integer_root(hi, 2);
  std::vector<char> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }

  constexpr std::uint64_t kSegment = 1u << 18;
  const std::uint64_t segments = (hi - lo) / kSegment + 1;
  std::vector<std::vector<std::uint64_t>> found(segments);
  parallel_for(segments, exec, [&](std::size_t s) {
    const std::uint64_t seg_lo = lo + s * kSegment;
    const std::uint64_t seg_hi = std::min(hi, seg_lo + kSegment - 1);
    std::vector<char> mark(seg_hi - seg_lo + 1, 1);
    for (auto p : base) {
      if (p * p > seg_hi) break;
      std::uint64_t start = std::max(p * p, (seg_lo + p - 1) / p * p);
      for (std::uint64_t m = start; m <= seg_hi; m += p) mark[m - seg_lo] = 0;
    }
    for (std::uint64_t i = 0; i < mark.size(); ++i) {
      if (mark[i]) found[s].push_back(seg_lo + i);
    }
  });
  for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
  return out;
}

/// Keeps the PS members of a sorted list, preserving order.
inline std::vector<std::uint64_t> filter_ps(std::span<const std::uint64_t> candidates,
                                            const GammaType& gamma, const Exec& exec = {}) {
  const std::size_t chunks = (candidates.size() + kReductionChunk - 1) / kReductionChunk;
  std::vector<std::vector<std::uint64_t>> kept(chunks);
  parallel_for(chunks, exec, [&](std::size_t c) {
    const std::size_t hi = std::min(candidates.size(), (c + 1) * kReductionChunk);
    for (std::size_t i = c * kReductionChunk; i < hi; ++i) {
      if (is_ps(candidates[i], gamma)) kept[c].push_back(candidates[i]);
    }
  });
  std::vector<std::uint64_t> out;
  for (auto& k : kept) out.insert(out.end(), k.begin(), k.end());
  return out;
}

/// Sorted PS primes of type gamma with lower < p^k <= upper, together with
/// the weights p^(1-gamma) log p.
struct PsPrimeTable {
  GammaType gamma{0.5};
  int k = 1;
  double lower = 0.0;  // lambda0 * X, exclusive
  double upper = 0.0;  // X, inclusive
  std::vector<std::uint64_t> primes;
  std::vector<double> weights;

  bool empty() const { return primes.empty(); }
  std::size_t size() const { return primes.size(); }
  double weight_sum() const { return pairwise_sum(weights); }
};

inline double ps_weight(std::uint64_t p, const GammaType& gamma) {
  const double pd = static_cast<double>(p);
  return std::pow(pd, 1.0 - gamma.value()) * std::log(pd);
}

/// Smallest and largest p with lower < p^k <= upper; empty when lo > hi.
inline std::pair<std::uint64_t, std::uint64_t> power_range(double lower, double upper, int k) {
  require(upper < 9.0e15 && lower >= 0.0, ErrorKind::Overflow, "range bound too large");
  const auto top = static_cast<std::uint64_t>(std::floor(upper));
  const std::uint64_t hi = integer_root(top, k);
  std::uint64_t lo = integer_root(static_cast<std::uint64_t>(std::floor(lower)), k);
  while (static_cast<double>(ipow(lo, k)) <= lower) ++lo;
  while (lo > 1 && static_cast<double>(ipow(lo - 1, k)) > lower) --lo;
  return {std::max<std::uint64_t>(lo, 1), hi};
}

inline PsPrimeTable sieve_ps_table(double X, double lambda0, int k, const GammaType& gamma,
                                   const Exec& exec = {}) {
  require(X >= 2.0, ErrorKind::Config, "X must be at least 2");
  require(lambda0 > 0.0 && lambda0 < 1.0, ErrorKind::Config, "lambda0 must lie in (0,1)");
  require(k >= 1 && k <= 4, ErrorKind::Config, "power index must be 1..4");
  PsPrimeTable table;
  table.gamma = gamma;
  table.k = k;
  table.lower = lambda0 * X;
  table.upper = X;
  const auto [lo, hi] = power_range(table.lower, table.upper, k);
  if (lo > hi) return table;
  const auto candidates = primes_in_range(lo, hi, exec);
  table.primes = filter_ps(candidates, gamma, exec);
  table.weights.reserve(table.primes.size());
  for (auto p : table.primes) table.weights.push_back(ps_weight(p, gamma));
  return table;
}

/// PS primes p <= X (the unweighted set used for moment computations).
inline std::vector<std::uint64_t> ps_primes_upto(double X, const GammaType& gamma,
                                                 const Exec& exec = {}) {
  if (X < 2.0) return {};
  const auto top = static_cast<std::uint64_t>(std::floor(X));
  return filter_ps(primes_in_range(2, top, exec), gamma, exec);
}

/// The first `count` PS primes of type gamma.
inline std::vector<std::uint64_t> first_ps_primes(std::size_t count, const GammaType& gamma,
                                                  const Exec& exec = {}) {
  std::vector<std::uint64_t> out;
  double X = 64.0;
  while (out.size() < count) {
    X *= 2.0;
    out = ps_primes_upto(X, gamma, exec);
  }
  out.resize(count);
  return out;
}

struct DensityRow {
  double X = 0.0;
  std::uint64_t count = 0;
  double ratio = 0.0;  // count * log X / X^gamma
};

inline std::vector<DensityRow> density_report(std::span<const double> xs, const GammaType& gamma,
                                              const Exec& exec = {}) {
  for (double x : xs) require(x >= 100.0, ErrorKind::Config, "density_report needs X >= 100");
  if (xs.empty()) return {};
  const double top = *std::max_element(xs.begin(), xs.end());
  const auto ps = ps_primes_upto(top, gamma, exec);
  std::vector<DensityRow> rows;
  for (double x : xs) {
    const auto bound = static_cast<std::uint64_t>(std::floor(x));
    const auto count = static_cast<std::uint64_t>(
        std::upper_bound(ps.begin(), ps.end(), bound) - ps.begin());
    rows.push_back({x, count, static_cast<double>(count) * std::log(x) / std::pow(x, gamma.value())});
  }
  return rows;
}

}  // namespace pstrident
