#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "pstrident/moments.hpp"

using namespace pstrident;

namespace {

PrimeSet set_of(std::vector<std::uint64_t> p) { return PrimeSet{std::move(p)}; }

std::map<i128, std::uint64_t> as_map(const SpectrumMap& s) {
  std::map<i128, std::uint64_t> m;
  for (const auto& e : s.entries) m[e.key] = e.count;
  return m;
}

i128 p4(std::uint64_t p) { return static_cast<i128>(ipow(p, 4)); }

}  // namespace

TEST(SpectrumB, SmallSet) {
  const auto b = spectrum_b(set_of({2, 3, 5}), 1);
  EXPECT_EQ(b.size(), 7u);
  EXPECT_EQ(b.at(0), 3u);
  EXPECT_EQ(b.at(65), 1u);
  EXPECT_EQ(b.at(-65), 1u);
  EXPECT_EQ(b.at(609), 1u);
  EXPECT_EQ(b.at(-544), 1u);
  EXPECT_EQ(static_cast<std::uint64_t>(b.total()), 9u);
}

TEST(SpectrumB, Singleton) {
  const auto b = spectrum_b(set_of({7}), 1);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b.at(0), 1u);
}

TEST(SpectrumB, BruteForceSecondOrder) {
  const std::vector<std::uint64_t> P{2, 3, 5, 7, 11, 13};
  std::map<i128, std::uint64_t> ref;
  for (auto a : P)
    for (auto b : P)
      for (auto c : P)
        for (auto d : P) ++ref[p4(a) + p4(b) - p4(c) - p4(d)];
  EXPECT_EQ(as_map(spectrum_b(set_of(P), 2)), ref);
}

TEST(SpectrumC, SmallSet) {
  const auto c = spectrum_c(set_of({2, 3, 5}));
  EXPECT_EQ(c.at(0), 3u);
  EXPECT_EQ(c.at(65), 1u);
  EXPECT_EQ(c.at(-65), 1u);
  EXPECT_EQ(c.size(), 7u);
}

TEST(SpectrumC, MatchesOrderedPairDifferences) {
  const auto P = prime_set_of_size(30, GammaType(0.9));
  std::map<i128, std::uint64_t> ref;
  for (auto p : P.primes)
    for (auto q : P.primes)
      ++ref[p4(q) - p4(p)];
  EXPECT_EQ(as_map(spectrum_c(P)), ref);
}

TEST(SpectrumCStar, Bounds) {
  const auto P = prime_set_of_size(25, GammaType(0.95));
  const auto c = spectrum_c_star(P);
  const std::uint64_t n = P.size();
  EXPECT_GE(c.at(0), n);
  EXPECT_LE(c.at(0), 2 * n * n - n);
  const auto single = spectrum_c_star(set_of({11}));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single.at(0), 1u);
}

TEST(SpectrumCBar, BoundsAndLimit) {
  const auto P = prime_set_of_size(12, GammaType(0.95));
  const auto c = spectrum_c_bar(P);
  const std::uint64_t n = P.size();
  EXPECT_LE(c.at(0), 7 * n * n * n);
  EXPECT_GE(c.at(0), n);
  const auto single = spectrum_c_bar(set_of({11}));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single.at(0), 1u);
  try {
    spectrum_c_bar(prime_set_of_size(61, GammaType(0.95)));
    FAIL() << "expected SizeLimit";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeLimit);
  }
}

TEST(ExactMoment, Examples) {
  const auto P = set_of({2, 3, 5});
  EXPECT_EQ(exact_moment(P, 1), 3u);
  EXPECT_EQ(exact_moment(P, 2), 15u);
  EXPECT_EQ(exact_moment(set_of({}), 2), 0u);
}

TEST(ExactMoment, LowerBoundAndDiagonal) {
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto P = prime_set_of_size(n, GammaType(0.9));
    for (int m : {1, 2, 4, 8}) {
      const auto v = exact_moment(P, m);
      EXPECT_GE(static_cast<double>(v), std::pow(static_cast<double>(n), m));
    }
    // Sums of two fourth powers of primes are unique up to order.
    EXPECT_EQ(exact_moment(P, 2), 2 * n * n - n);
  }
}

TEST(ExactMoment, IdentitiesWithSpectra) {
  const auto P = prime_set_of_size(15, GammaType(0.95));
  EXPECT_EQ(exact_moment(P, 1), static_cast<std::uint64_t>(spectrum_b(P, 1).at(0)));
  EXPECT_EQ(exact_moment(P, 2), spectrum_b(P, 2).at(0));
  EXPECT_EQ(exact_moment(P, 4), spectrum_b(P, 4).at(0));
  EXPECT_EQ(exact_moment(P, 2),
            static_cast<std::uint64_t>(spectrum_dot(spectrum_b(P, 1), spectrum_b(P, 1))));
  EXPECT_EQ(exact_moment(P, 4),
            static_cast<std::uint64_t>(spectrum_dot(spectrum_b(P, 2), spectrum_b(P, 2))));
}

TEST(QuadratureMoment, Examples) {
  const auto P = set_of({2, 3, 5});
  EXPECT_NEAR(quadrature_moment(P, 2, 5001), 15.0, 1e-9);
  EXPECT_NEAR(quadrature_moment(P, 2), 15.0, 1e-9);
  EXPECT_EQ(quadrature_moment(set_of({}), 2), 0.0);
}

TEST(QuadratureMoment, AgreesWithExact) {
  for (std::size_t n : {4, 9, 14}) {
    const auto P = prime_set_of_size(n, GammaType(0.9));
    for (int m : {1, 2}) {
      const double exact = static_cast<double>(exact_moment(P, m));
      EXPECT_NEAR(quadrature_moment(P, m), exact, 1e-9 * exact) << n << " " << m;
    }
  }
}

TEST(QuadratureMoment, IndependentOfThreadCount) {
  const auto P = prime_set_of_size(10, GammaType(0.9));
  EXPECT_EQ(quadrature_moment(P, 2, 0, Exec{1}), quadrature_moment(P, 2, 0, Exec{5}));
}

TEST(Scaling, LogLogSlopeOfPowerLaw) {
  const std::vector<double> xs{10, 20, 40, 80}, ys{100, 400, 1600, 6400};
  EXPECT_NEAR(loglog_slope(xs, ys), 2.0, 1e-12);
}

TEST(Scaling, ReportRows) {
  const std::size_t sizes[] = {4, 8, 12};
  const auto r = scaling_report(GammaType(0.9), sizes);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].set_size, 4u);
  EXPECT_TRUE(r.slope8.has_value());
}
