#pragma once

// Compactly supported smoothing kernel.
//
// theta = (indicator of [-a, a]) * (k-fold convolution of the unit-mass box of
// width w), with a = 7 eps / 8 and w = eps / (4k). Hence theta = 1 on
// |y| <= 3 eps / 4, 0 < theta < 1 on the ramp, theta = 0 for |y| >= eps, and
//
//   Theta(x) = sin(2 pi a x) / (pi x) * (sin(pi w x) / (pi w x))^k,
//
// so |Theta(x)| <= min(2a, 1/(pi|x|), (1/(pi|x|)) (4k / (pi eps |x|))^k).
//
// theta(y) = F(y + a) - F(y - a) where F is the CDF of S, a sum of k
// independent uniforms on [-w/2, w/2]; S = w (U - k/2) with U Irwin-Hall(k).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "pstrident/errors.hpp"

namespace pstrident {

class SmoothingKernel {
 public:
  SmoothingKernel(double eps, int k) : eps_(eps), k_(k) {
    require(eps > 0.0 && std::isfinite(eps), ErrorKind::Config, "kernel eps must be positive");
    require(k >= 1, ErrorKind::Config, "kernel order k must be at least 1");
  }
  double eps() const { return eps_; }
  int k() const { return k_; }
  double a() const { return 7.0 * eps_ / 8.0; }
  double w() const { return eps_ / (4.0 * k_); }

 private:
  double eps_;
  int k_;
};

namespace detail {

inline constexpr int kExactIrwinHallMaxOrder = 12;

inline double binomial(int n, int r) {
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// (1/(k+m)!) sum_{i <= x} (-1)^i C(k,i) (x-i)^(k+m): the m-fold antiderivative
// of the Irwin-Hall CDF, i.e. E[(x - U)_+^m] / m!. Accurate for x <= k/2.
inline double irwin_hall_lower(double x, int k, int m) {
  if (x <= 0.0) return 0.0;
  long double acc = 0.0L;
  const int top = static_cast<int>(std::floor(x));
  for (int i = 0; i <= std::min(top, k); ++i) {
    const long double term = binomial(k, i) * std::pow(static_cast<long double>(x - i), k + m);
    acc += (i % 2 == 0) ? term : -term;
  }
  return static_cast<double>(acc / factorial(k + m));
}

// Irwin-Hall density (1/(k-1)!) sum_{i <= x} (-1)^i C(k,i) (x-i)^(k-1).
inline long double irwin_hall_density(long double x, int k) {
  if (x <= 0.0L || x >= k) return 0.0L;
  long double acc = 0.0L;
  const int top = static_cast<int>(std::floor(x));
  for (int i = 0; i <= top; ++i) {
    const long double term = binomial(k, i) * std::pow(x - i, static_cast<long double>(k - 1));
    acc += (i % 2 == 0) ? term : -term;
  }
  return acc / factorial(k - 1);
}

// CDF below the median for large orders: Gauss-Legendre over unit panels
// between the knots of the piecewise-polynomial density.
inline double irwin_hall_cdf_quadrature(double x, int k) {
  using Rule = boost::math::quadrature::gauss<long double, 64>;
  long double acc = 0.0L;
  for (int lo = 0; lo < x; ++lo) {
    const long double hi = std::min<long double>(lo + 1, x);
    acc += Rule::integrate([k](long double u) { return irwin_hall_density(u, k); },
                           static_cast<long double>(lo), hi);
  }
  return static_cast<double>(acc);
}

// E[(y - V)^m] / m! for V = U - k/2 (mean zero, variance k/12); m <= 2.
inline double centered_polynomial(double y, int k, int m) {
  switch (m) {
    case 0: return 1.0;
    case 1: return y;
    default: return 0.5 * (y * y + k / 12.0);
  }
}

// E[(x - U)_+^m] / m! for any x, using the reflection U -> k - U above k/2.
inline double irwin_hall_antiderivative(double x, int k, int m) {
  if (x <= 0.0) return 0.0;
  if (x >= k) return centered_polynomial(x - 0.5 * k, k, m);
  if (2.0 * x <= k) {
    if (m == 0 && k > kExactIrwinHallMaxOrder) return irwin_hall_cdf_quadrature(x, k);
    return irwin_hall_lower(x, k, m);
  }
  const double mirrored = irwin_hall_antiderivative(k - x, k, m);
  return centered_polynomial(x - 0.5 * k, k, m) - ((m % 2 == 0) ? mirrored : -mirrored);
}

}  // namespace detail

/// CDF of the k-fold box convolution, evaluated at s.
inline double box_cdf(double s, const SmoothingKernel& kernel) {
  const double x = s / kernel.w() + 0.5 * kernel.k();
  return detail::irwin_hall_antiderivative(x, kernel.k(), 0);
}

inline double theta(double y, const SmoothingKernel& kernel) {
  const double ay = std::abs(y);
  if (ay <= 0.75 * kernel.eps()) return 1.0;
  if (ay >= kernel.eps()) return 0.0;
  // On the ramp theta(y) = 1 - F(|y| - a) = F(a - |y|) by symmetry of S.
  double v = box_cdf(kernel.a() - ay, kernel);
  if (v <= 0.0) v = std::numeric_limits<double>::denorm_min();
  if (v >= 1.0) v = std::nextafter(1.0, 0.0);
  return v;
}

/// Fourier transform of theta, in closed form. Real and even.
inline double theta_fourier(double x, const SmoothingKernel& kernel) {
  const double ax = std::abs(x);
  const double two_a = 2.0 * kernel.a();
  if (ax == 0.0) return two_a;
  const double pi = std::numbers::pi;
  // sin(2 pi a x) / (pi x) = 2a sinc(2 a x) with sinc(u) = sin(pi u)/(pi u).
  auto sinc = [pi](double u) {
    if (std::abs(u) < 1e-8) return 1.0 - (pi * u) * (pi * u) / 6.0;
    return std::sin(pi * u) / (pi * u);
  };
  const double box = sinc(kernel.w() * ax);
  return two_a * sinc(two_a * ax) * std::pow(box, kernel.k());
}

/// min(7 eps/4, 1/(pi|x|), (1/(pi|x|)) (4k/(pi eps |x|))^k).
inline double theta_fourier_bound(double x, const SmoothingKernel& kernel) {
  const double ax = std::abs(x);
  const double plateau = 7.0 * kernel.eps() / 4.0;
  if (ax == 0.0) return plateau;
  const double pi = std::numbers::pi;
  const double decay = 1.0 / (pi * ax);
  const double smooth = decay * std::pow(4.0 * kernel.k() / (pi * kernel.eps() * ax), kernel.k());
  return std::min({plateau, decay, smooth});
}

/// (1/k) (4k/(pi eps T))^k, the integral over t > T of
/// (1/t) (k/(2 pi t eps/8))^k.
inline double theta_tail_mass(double T, const SmoothingKernel& kernel) {
  require(T > 0.0, ErrorKind::Config, "tail start must be positive");
  const double k = kernel.k();
  return std::pow(4.0 * k / (std::numbers::pi * kernel.eps() * T), k) / k;
}

/// Second antiderivative of theta (zero at -infinity).
inline double theta_second_antiderivative(double z, const SmoothingKernel& kernel) {
  const double a = kernel.a();
  const double half_support = 0.5 * kernel.k() * kernel.w();
  if (z + a <= -half_support) return 0.0;
  if (z - a >= half_support) return 2.0 * a * z;
  const double w = kernel.w();
  const int k = kernel.k();
  auto psi2 = [&](double s) {
    return w * w * detail::irwin_hall_antiderivative(s / w + 0.5 * k, k, 2);
  };
  return psi2(z + a) - psi2(z - a);
}

}  // namespace pstrident
