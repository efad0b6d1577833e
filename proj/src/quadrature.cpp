#include "hadfem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "legendre.hpp"

namespace hadfem {

QuadratureRule QuadratureRule::gauss_legendre(std::size_t npoints) {
  if (npoints < 1 || npoints > 64)
    throw std::invalid_argument("gauss_legendre: npoints must be in [1, 64], got " +
                                std::to_string(npoints));
  QuadratureRule rule;
  rule.points.assign(npoints, 0.0);
  rule.weights.assign(npoints, 0.0);
  if (npoints == 1) {
    rule.points[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }

  const double n = static_cast<double>(npoints);
  // Positive half of the roots; the rest follows by symmetry. For odd n the
  // midpoint root is exactly 0 and handled by the same loop.
  for (std::size_t k = 0; k < (npoints + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(k) + 0.75) /
                        (n + 0.5));
    double pk = 0.0, dpk = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, dp] = detail::legendre_pd(npoints, x);
      pk = p;
      dpk = dp;
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        auto [p2, dp2] = detail::legendre_pd(npoints, x);
        pk = p2;
        dpk = dp2;
        break;
      }
    }
    if (std::abs(pk) > 1e-13)
      throw std::runtime_error("gauss_legendre: node polish failed at k = " +
                               std::to_string(k));
    const double w = 2.0 / ((1.0 - x * x) * dpk * dpk);
    rule.points[npoints - 1 - k] = x;
    rule.weights[npoints - 1 - k] = w;
    rule.points[k] = -x;
    rule.weights[k] = w;
  }
  if (npoints % 2 == 1) rule.points[npoints / 2] = 0.0;
  return rule;
}

MappedQuadrature map_to_interval(const QuadratureRule& rule, double x0,
                                 double x1) {
  if (!(x0 < x1))
    throw std::invalid_argument("map_to_interval: requires x0 < x1");
  const double mid = 0.5 * (x0 + x1);
  const double half = 0.5 * (x1 - x0);
  MappedQuadrature out;
  out.points.reserve(rule.size());
  out.weights.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    out.points.push_back(mid + half * rule.points[i]);
    out.weights.push_back(half * rule.weights[i]);
  }
  return out;
}

}  // namespace hadfem
