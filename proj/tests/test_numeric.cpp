#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "pstrident/numeric.hpp"
#include "pstrident/real_expr.hpp"

using namespace pstrident;

TEST(Psi, CentredSawtooth) {
  EXPECT_DOUBLE_EQ(psi(0.0), -0.5);
  EXPECT_DOUBLE_EQ(psi(2.75), 0.25);
  EXPECT_DOUBLE_EQ(psi(-0.25), 0.25);
  for (double t = -5.0; t < 5.0; t += 0.173) {
    EXPECT_GE(psi(t), -0.5);
    EXPECT_LT(psi(t), 0.5);
    EXPECT_NEAR(psi(t + 3.0), psi(t), 1e-12);
  }
}

TEST(UnitExp, QuarterTurns) {
  EXPECT_EQ(unit_exp(0.0), std::complex<double>(1.0, 0.0));
  EXPECT_NEAR(std::abs(unit_exp(0.5) - std::complex<double>(-1.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(unit_exp(0.25) - std::complex<double>(0.0, 1.0)), 0.0, 1e-15);
}

TEST(UnitExp, PeriodicAndUnimodular) {
  for (double t = -3.0; t < 3.0; t += 0.0137) {
    const auto z = unit_exp(t);
    EXPECT_NEAR(std::abs(z), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(unit_exp(t + 7.0) - z), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(std::conj(z) - unit_exp(-t)), 0.0, 1e-15);
  }
}

TEST(UnitExp, ExactPhaseForLargeFrequencies) {
  // t * f = 0.25 + integer exactly; naive evaluation loses the phase.
  const std::int64_t f = 1LL << 40;
  const double t = 0.25 / static_cast<double>(f) + 3.0;
  const auto z = unit_exp_mul(t, f);
  const long double ref = 2.0L * 3.14159265358979323846L * 0.25L;
  EXPECT_NEAR(z.real(), std::cos(static_cast<double>(ref)), 1e-12);
  EXPECT_NEAR(z.imag(), 1.0, 1e-12);
}

TEST(GuardedFloor, Examples) {
  EXPECT_EQ(guarded_floor({3.5, 1e-12}), 3);
  EXPECT_EQ(guarded_floor({-1.2, 1e-12}), -2);
  try {
    guarded_floor({2.9999999999, 1e-9});
    FAIL() << "expected AmbiguousFloor";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AmbiguousFloor);
  }
}

TEST(CertifiedPower, MatchesHighPrecisionValues) {
  struct Case {
    std::uint64_t n;
    double g;
    std::int64_t floor;
    double frac;
  };
  // Reference floors and fractional parts from 40-digit arithmetic.
  const Case cases[] = {
      {13, 0.9, 10, 0.058865869794324496762},     {14, 0.9, 10, 0.75264312724329332149},
      {2, 0.9, 1, 0.86606598307361486068},        {3, 0.9, 2, 0.68787537952228664915},
      {1000000, 0.9955, 939723, 0.31056463849466678454},
      {999983, 0.95, 501179, 0.13945000885272200215},
  };
  for (const auto& c : cases) {
    const auto v = certified_power(c.n, c.g);
    EXPECT_EQ(v.floor, c.floor) << c.n;
    EXPECT_NEAR(v.frac, c.frac, 1e-9) << c.n;
  }
}

TEST(CertifiedPower, ExactIntegerPowerIsAmbiguous) {
  // 4^0.5 is exactly 2, so no precision separates it from the integer.
  try {
    certified_power(4, 0.5);
    FAIL() << "expected AmbiguousFloor";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AmbiguousFloor);
  }
}

TEST(DivisorTau, Examples) {
  EXPECT_EQ(divisor_tau(12, 2), 6u);
  EXPECT_EQ(divisor_tau(1, 4), 1u);
  EXPECT_EQ(divisor_tau(6, 4), 16u);
  EXPECT_EQ(divisor_tau(-12, 2), 6u);
  try {
    divisor_tau(0, 2);
    FAIL() << "expected ZeroArgument";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroArgument);
  }
}

TEST(DivisorTau, MatchesBruteForceUpTo10000) {
  // tau_k(j) counts ordered k-tuples with product j: repeated Dirichlet
  // convolution with the constant function.
  const int N = 10000;
  std::vector<std::uint64_t> t1(N + 1, 1), t2(N + 1, 0), t3(N + 1, 0), t4(N + 1, 0);
  auto dirichlet = [&](const std::vector<std::uint64_t>& a, std::vector<std::uint64_t>& out) {
    for (int d = 1; d <= N; ++d)
      for (int m = d; m <= N; m += d) out[m] += a[d];
  };
  dirichlet(t1, t2);
  dirichlet(t2, t3);
  dirichlet(t3, t4);
  for (int j = 1; j <= N; ++j) {
    ASSERT_EQ(divisor_tau(j, 2), t2[j]) << j;
    ASSERT_EQ(divisor_tau(j, 3), t3[j]) << j;
    ASSERT_EQ(divisor_tau(j, 4), t4[j]) << j;
  }
}

TEST(DivisorTau, LargeArgument) {
  // 2^10 * 3^5 * 1000003 (prime): tau_2 = 11 * 6 * 2.
  const i128 j = static_cast<i128>(1024) * 243 * 1000003;
  EXPECT_EQ(divisor_tau(j, 2), 132u);
}

TEST(IsPrime, AgreesWithTrialDivision) {
  for (std::uint64_t n = 0; n < 5000; ++n) {
    bool ref = n >= 2;
    for (std::uint64_t d = 2; d * d <= n && ref; ++d) ref = n % d != 0;
    ASSERT_EQ(is_prime(n), ref) << n;
  }
  EXPECT_TRUE(is_prime(1000000007ULL));
  EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(IntegerRoot, Exact) {
  EXPECT_EQ(integer_root(80, 4), 2u);
  EXPECT_EQ(integer_root(81, 4), 3u);
  EXPECT_EQ(integer_root(82, 4), 3u);
  EXPECT_EQ(integer_root(999999999999ULL, 2), 999999u);
}

TEST(RealExpr, Forms) {
  EXPECT_DOUBLE_EQ(RealExpr::parse("sqrt:2").to_double(), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(RealExpr::parse("7/3").to_double(), 7.0 / 3.0);
  EXPECT_DOUBLE_EQ(RealExpr::parse("-0.25").to_double(), -0.25);
  EXPECT_TRUE(RealExpr::parse("sqrt:2").symbolic());
  EXPECT_FALSE(RealExpr::parse("sqrt:2").rational());
  EXPECT_TRUE(RealExpr::parse("sqrt:4").rational());
  EXPECT_TRUE(RealExpr::parse("7/3").rational());
  EXPECT_TRUE(RealExpr::parse("-2").rational());
  EXPECT_FALSE(RealExpr::parse("2.0").rational());
  EXPECT_THROW(RealExpr::parse("abc"), Error);
}
