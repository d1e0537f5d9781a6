#pragma once

#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pstrident {

/// Nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

namespace detail {

// Boost stores the non-negative half of symmetric rules; abscissa()[0] is
// zero for odd orders.
template <class Abscissa, class Weights>
QuadratureRule unfold(const Abscissa& x, const Weights& w, bool odd) {
  QuadratureRule r;
  for (std::size_t i = x.size(); i-- > 0;) {
    if (odd && i == 0) continue;
    r.nodes.push_back(-static_cast<double>(x[i]));
    r.weights.push_back(static_cast<double>(w[i]));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.nodes.push_back(static_cast<double>(x[i]));
    r.weights.push_back(static_cast<double>(w[i]));
  }
  return r;
}

}  // namespace detail

template <unsigned N>
const QuadratureRule& gauss_legendre() {
  using G = boost::math::quadrature::gauss<double, N>;
  static const QuadratureRule rule = detail::unfold(G::abscissa(), G::weights(), N % 2 == 1);
  return rule;
}

/// Kronrod extension of order 15 with its embedded 7-point Gauss weights
/// (zero at the Kronrod-only nodes).
struct KronrodRule {
  QuadratureRule kronrod;
  std::vector<double> gauss_weights;
};

inline const KronrodRule& gauss_kronrod15() {
  static const KronrodRule rule = [] {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    KronrodRule r;
    r.kronrod = detail::unfold(GK::abscissa(), GK::weights(), true);
    // Kronrod abscissa k in the half table is a Gauss node iff k is even.
    std::vector<double> half(GK::abscissa().size(), 0.0);
    for (std::size_t i = 0; i < half.size(); i += 2) half[i] = G::weights()[i / 2];
    r.gauss_weights = detail::unfold(GK::abscissa(), half, true).weights;
    return r;
  }();
  return rule;
}

}  // namespace pstrident
