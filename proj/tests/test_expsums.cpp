#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pstrident/expsums.hpp"
#include "pstrident/verify.hpp"

using namespace pstrident;

namespace {

ExpSumSpec s_spec(double X, double lambda0, double gamma, int k) {
  return {SumKind::S, k, X, lambda0, GammaType(gamma)};
}

}  // namespace

TEST(EvalSum, MatchesHighPrecisionReference) {
  struct Case {
    double t, X, l0, g;
    int k;
    double re, im;
  };
  // Reference sums evaluated term by term with 50-digit arithmetic at the
  // binary values of t and gamma.
  const Case cases[] = {
      {0.123, 1e4, 1e-3, 0.95, 4, 2.11636277009338342, 0.278953481268281033},
      {0.3217, 1e8, 1e-3, 0.95, 4, 6.8712317448964152, -0.955611514217454441},
      {-0.0071, 1e6, 0.01, 0.9, 2, 34.8030535128584181, 44.7576617583397672},
      {0.41, 1e5, 1e-3, 0.97, 1, 256.527217823331919, -283.526328186390557},
  };
  for (const auto& c : cases) {
    const auto v = eval_sum(s_spec(c.X, c.l0, c.g, c.k), c.t);
    EXPECT_NEAR(v.value.real(), c.re, 1e-10 * std::abs(v.value)) << c.t;
    EXPECT_NEAR(v.value.imag(), c.im, 1e-10 * std::abs(v.value)) << c.t;
  }
}

TEST(EvalSum, CountsFourthPowersAtZero) {
  const ExpSumSpec u{SumKind::U, 4, 100, 0.05, std::nullopt};
  const auto v = eval_sum(u, 0.0);
  EXPECT_DOUBLE_EQ(v.value.real(), 2.0);
  EXPECT_DOUBLE_EQ(v.value.imag(), 0.0);
}

TEST(EvalSum, ConjugateSymmetryAndWeightSum) {
  const auto spec = s_spec(1e6, 0.01, 0.93, 4);
  const auto table = build_sum_table(spec);
  double weights = 0.0;
  for (double c : table.coefs) weights += c;
  EXPECT_NEAR(eval_sum(table, 0.0).real(), weights, 1e-12 * weights);
  for (double t : {0.1, 0.77, 3.25}) {
    EXPECT_NEAR(std::abs(eval_sum(table, -t) - std::conj(eval_sum(table, t))), 0.0, 1e-12 * weights);
    EXPECT_LE(std::abs(eval_sum(table, t)), weights * (1 + 1e-12));
  }
}

TEST(EvalSum, EmptyRangeIsZero) {
  const auto v = eval_sum(s_spec(10, 0.99, 0.95, 1), 0.3);
  EXPECT_TRUE(v.range_empty);
  EXPECT_EQ(v.value, cplx(0.0, 0.0));
}

TEST(EvalSum, GammaRequiredExactlyForPsSums) {
  EXPECT_THROW(build_sum_table({SumKind::S, 4, 1e4, 0.1, std::nullopt}), Error);
  EXPECT_THROW(build_sum_table({SumKind::U, 4, 1e4, 0.1, GammaType(0.9)}), Error);
}

TEST(SweepSum, AgreesWithDirectEvaluation) {
  const auto table = build_sum_table(s_spec(1e8, 1e-3, 0.95, 4));
  const std::size_t n = 20000;
  // Binary dt keeps every t0 + i dt exact, so only the rotation error remains.
  const double t0 = -0.25, dt = 1.0 / 8192.0;
  std::vector<cplx> out(n);
  sweep_sum(table, t0, dt, n, out);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; i += 37) {
    const cplx ref = eval_sum(table, t0 + static_cast<double>(i) * dt);
    worst = std::max(worst, std::abs(out[i] - ref));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(SweepSum, IndependentOfThreadCount) {
  const auto table = build_sum_table(s_spec(1e7, 1e-3, 0.95, 2));
  const std::size_t n = 50000;
  std::vector<cplx> a(n), b(n);
  sweep_sum(table, 0.1, 1e-5, n, a, Exec{1});
  sweep_sum(table, 0.1, 1e-5, n, b, Exec{6});
  EXPECT_EQ(a, b);
}

TEST(EvalI, ClosedFormAtZeroAndForLinearPhase) {
  const double X = 1e4, l0 = 0.05;
  EXPECT_NEAR(eval_I(4, 0.0, X, l0).real(), std::pow(X, 0.25) - std::pow(l0 * X, 0.25), 1e-10);
  const double t = 0.0123;
  const cplx closed = (unit_exp(t * X) - unit_exp(t * l0 * X)) / cplx(0.0, 2 * std::numbers::pi * t);
  EXPECT_NEAR(std::abs(eval_I(1, t, X, l0) - closed), 0.0, 1e-9);
}

TEST(EvalI, MatchesHighPrecisionReference) {
  struct Case {
    int k;
    double t, X, l0, re, im;
  };
  // Reference values from 40-digit adaptive integration in the y variable.
  const Case cases[] = {
      {4, 0.013, 1e4, 0.05, -0.00053285875864230947258, -0.031984075708421718297},
      {4, -0.2, 1e4, 0.05, 2.2339660613488543067e-6, -0.0016825432172441202538},
      {1, 0.37, 1000, 0.1, -1.6353285092451630252e-14, 0.0},
      {2, 0.05, 500, 0.2, 0.0022970269402747034619, 0.087860954805702917719},
  };
  for (const auto& c : cases) {
    const cplx v = eval_I(c.k, c.t, c.X, c.l0);
    EXPECT_NEAR(v.real(), c.re, 1e-9) << c.k << " " << c.t;
    EXPECT_NEAR(v.imag(), c.im, 1e-9) << c.k << " " << c.t;
  }
}

TEST(EvalI, SecondDerivativeBoundAndSymmetry) {
  const double X = 2e4, l0 = 0.01;
  for (int k = 1; k <= 4; ++k) {
    for (double t : {1e-5, 3e-4, 0.01, 0.2}) {
      const cplx v = eval_I(k, t, X, l0);
      EXPECT_LE(std::abs(v), 4.0 * std::pow(X, 1.0 / k - 1.0) * std::min(X, 1.0 / t) + 1e-12);
      EXPECT_NEAR(std::abs(eval_I(k, -t, X, l0) - std::conj(v)), 0.0, 1e-12);
    }
  }
}

TEST(DecomposeS4, ResidualIsRoundingOnly) {
  const auto d = decompose_S4(0.37, 1e4, 1e-3, GammaType(0.95));
  ASSERT_FALSE(d.range_empty);
  EXPECT_LE(std::abs(d.residual), 1e-9 * d.weight_scale);
  const auto s = eval_sum(s_spec(1e4, 1e-3, 0.95, 4), 0.37);
  EXPECT_NEAR(std::abs(d.s4 - s.value), 0.0, 1e-12 * d.weight_scale);
}

TEST(DecomposeS4, ManyPoints) {
  for (double t : verify::sample_points(40, 10.0, 7)) {
    const auto d = decompose_S4(t, 1e6, 1e-3, GammaType(0.97));
    EXPECT_LE(std::abs(d.residual), 1e-9 * std::max(d.weight_scale, 1.0)) << t;
  }
}

TEST(DecomposeS4, EmptyRange) {
  const auto d = decompose_S4(0.2, 10, 0.99, GammaType(0.95));
  EXPECT_TRUE(d.range_empty);
  EXPECT_EQ(d.s4, cplx(0.0, 0.0));
  EXPECT_EQ(d.residual, cplx(0.0, 0.0));
}

TEST(EulerGap, SmallAtZeroAndBoundedElsewhere) {
  for (double X : {1e3, 1e5, 1e7}) {
    ExpSumSpec u{SumKind::U, 4, X, 0.01, std::nullopt};
    const cplx diff = eval_I(4, 0.0, X, 0.01) - eval_sum(u, 0.0).value;
    EXPECT_LE(std::abs(diff), 2.0);
  }
  for (double t : verify::sample_points(200, 1e-3, 11)) {
    EXPECT_LE(euler_gap(t, 1e5, 0.01), 20.0) << t;
  }
}
