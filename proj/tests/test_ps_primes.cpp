#include <gtest/gtest.h>

#include <vector>

#include "pstrident/oracle/brute.hpp"
#include "pstrident/ps_primes.hpp"

using namespace pstrident;

TEST(PsPrime, Examples) {
  EXPECT_TRUE(is_ps_prime(2, GammaType(0.9)));
  EXPECT_FALSE(is_ps_prime(13, GammaType(0.9)));
  EXPECT_FALSE(is_ps_prime(15, GammaType(0.9)));
}

TEST(PsPrime, GammaOutsideUnitIntervalRejected) {
  EXPECT_THROW(GammaType(1.2), Error);
  EXPECT_THROW(GammaType(0.0), Error);
}

TEST(SieveTable, Examples) {
  const auto t = sieve_ps_table(100, 0.05, 4, GammaType(0.9));
  EXPECT_EQ(t.primes, (std::vector<std::uint64_t>{2, 3}));
  EXPECT_EQ(t.weights.size(), 2u);
  const auto e = sieve_ps_table(10, 0.99, 1, GammaType(0.95));
  EXPECT_TRUE(e.empty());
}

TEST(SieveTable, WeightsAndRange) {
  const GammaType g(0.95);
  const auto t = sieve_ps_table(1e5, 0.01, 2, g);
  ASSERT_FALSE(t.empty());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double p = static_cast<double>(t.primes[i]);
    EXPECT_GT(p * p, 1e3);
    EXPECT_LE(p * p, 1e5);
    EXPECT_NEAR(t.weights[i], std::pow(p, 0.05) * std::log(p), 1e-12 * t.weights[i]);
  }
}

TEST(SieveTable, AgreesWithNSideEnumeration) {
  for (double g : {0.9, 0.95, 0.99, 0.9955}) {
    const auto pside = ps_primes_upto(2e5, GammaType(g));
    const auto nside = oracle::ps_primes_nside(200000, g);
    EXPECT_EQ(pside, nside) << g;
  }
}

TEST(SieveTable, DeterministicAcrossThreadCounts) {
  const GammaType g(0.93);
  const auto a = ps_primes_upto(3e5, g, Exec{1});
  const auto b = ps_primes_upto(3e5, g, Exec{7});
  EXPECT_EQ(a, b);
}

TEST(Density, PrimeCountAtGammaNearOne) {
  // Every prime is PS for gamma close enough to 1 over a short range.
  const double xs[] = {1e4};
  const auto rows = density_report(xs, GammaType(0.999999));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].count, 1229u);
}

TEST(Density, CountsMatchNSide) {
  const double xs[] = {1e3, 1e4, 1e5};
  const auto rows = density_report(xs, GammaType(0.95));
  for (const auto& r : rows) {
    EXPECT_EQ(r.count, oracle::ps_primes_nside(static_cast<std::uint64_t>(r.X), 0.95).size());
    EXPECT_NEAR(r.ratio, r.count * std::log(r.X) / std::pow(r.X, 0.95), 1e-12 * r.ratio);
  }
}

TEST(FirstPsPrimes, PrefixOfUpTo) {
  const GammaType g(0.9);
  const auto first = first_ps_primes(50, g);
  ASSERT_EQ(first.size(), 50u);
  const auto all = ps_primes_upto(static_cast<double>(first.back()), g);
  EXPECT_EQ(first, all);
}
