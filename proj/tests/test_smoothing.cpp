#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pstrident/oracle/brute.hpp"
#include "pstrident/smoothing.hpp"

using namespace pstrident;

TEST(Theta, Examples) {
  for (int k = 1; k <= 8; ++k) {
    const SmoothingKernel K(1.0, k);
    EXPECT_DOUBLE_EQ(theta(0.0, K), 1.0);
    EXPECT_DOUBLE_EQ(theta(1.0, K), 0.0);
    EXPECT_DOUBLE_EQ(theta(-1.0, K), 0.0);
  }
  EXPECT_NEAR(theta(0.9, SmoothingKernel(1.0, 1)), 0.4, 1e-14);
}

TEST(Theta, MatchesIndependentConvolution) {
  struct Case {
    double eps;
    int k;
    double y, want;
  };
  // Reference values from 40-digit integration of the Irwin-Hall density.
  const Case cases[] = {
      {1, 3, 0.8, 0.96399999999999990408},   {1, 3, 0.95, 0.036000000000000095923},
      {1, 6, 0.85, 0.79724000000000021099},  {2, 4, 1.7, 0.74853333333333352471},
      {1, 13, 0.8, 0.99996109524643338142},  {1, 13, 0.9, 0.10714271095201247704},
      {1, 20, 0.87, 0.62079856390261608001},
  };
  for (const auto& c : cases) {
    const SmoothingKernel K(c.eps, c.k);
    EXPECT_NEAR(theta(c.y, K), c.want, 1e-10) << c.k << " " << c.y;
    EXPECT_NEAR(theta(-c.y, K), c.want, 1e-10);
  }
}

TEST(Theta, RegimesAndMonotonicity) {
  const SmoothingKernel K(1.3, 5);
  const double inner = K.eps() * 3.0 / 4.0, outer = K.eps();
  double prev = 1.0;
  for (double y = 0.0; y <= 1.5; y += 0.001) {
    const double v = theta(y, K);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_LE(v, prev + 1e-15);
    if (y <= inner) {
      EXPECT_DOUBLE_EQ(v, 1.0);
    }
    if (y >= outer) {
      EXPECT_DOUBLE_EQ(v, 0.0);
    }
    prev = v;
  }
}

TEST(ThetaFourier, Examples) {
  const SmoothingKernel K(0.5, 2);
  EXPECT_DOUBLE_EQ(theta_fourier(0.0, K), 7.0 * 0.5 / 4.0);
  EXPECT_DOUBLE_EQ(theta_fourier(1.3, K), theta_fourier(-1.3, K));
  EXPECT_LE(std::abs(theta_fourier(3.7, K)), 1.0 / (std::numbers::pi * 3.7));
}

TEST(ThetaFourier, BoundHoldsOnLogGrid) {
  for (int k = 1; k <= 6; ++k) {
    for (double eps : {0.1, 1.0, 7.0}) {
      const SmoothingKernel K(eps, k);
      for (double lx = -4.0; lx <= 4.0; lx += 0.01) {
        const double x = std::pow(10.0, lx);
        EXPECT_LE(std::abs(theta_fourier(x, K)), theta_fourier_bound(x, K) * (1 + 1e-12) + 1e-300);
      }
    }
  }
}

TEST(ThetaFourier, InverseTransformReconstructsTheta) {
  const SmoothingKernel K(1.0, 4);
  const double T = 4.0 * 4 / (std::numbers::pi * 1.0) * std::pow(1e-10 * 4, -0.25);
  for (double y : {0.0, 0.3, 0.75, 0.8, 0.9, 0.99, 1.2}) {
    const double rec = oracle::inverse_transform([&](double x) { return theta_fourier(x, K); }, y,
                                                 T, 0.25);
    EXPECT_NEAR(rec, theta(y, K), 1e-8) << y;
  }
}

TEST(TailMass, Examples) {
  for (int k = 1; k <= 6; ++k) {
    const SmoothingKernel K(0.7, k);
    EXPECT_NEAR(theta_tail_mass(4.0 * k / (std::numbers::pi * 0.7), K), 1.0 / k, 1e-14);
  }
  EXPECT_NEAR(theta_tail_mass(8.0 / std::numbers::pi, SmoothingKernel(1.0, 1)), 0.5, 1e-15);
  const SmoothingKernel K2(1.0, 2);
  EXPECT_NEAR(theta_tail_mass(10.0, K2) / theta_tail_mass(20.0, K2), 4.0, 1e-12);
}

TEST(SecondAntiderivative, MatchesNumericalIntegralOfTheta) {
  const SmoothingKernel K(0.8, 3);
  // d^2/dz^2 of the antiderivative is theta; check by central differences.
  for (double z = -1.0; z <= 1.0; z += 0.05) {
    const double h = 1e-3;
    const double d2 = (theta_second_antiderivative(z + h, K) - 2 * theta_second_antiderivative(z, K) +
                       theta_second_antiderivative(z - h, K)) /
                      (h * h);
    EXPECT_NEAR(d2, theta(z, K), 2e-5) << z;
  }
  EXPECT_EQ(theta_second_antiderivative(-2.0, K), 0.0);
  // Beyond the support the slope is the total mass 2a.
  EXPECT_NEAR(theta_second_antiderivative(3.0, K) - theta_second_antiderivative(2.0, K),
              2.0 * K.a(), 1e-12);
}
