#pragma once

#include <cstddef>
#include <vector>

namespace hadfem {

// Gauss-Legendre rule on the reference interval [-1, 1]. An n-point rule
// integrates polynomials up to degree 2n - 1 exactly.
struct QuadratureRule {
  std::vector<double> points;   // ascending
  std::vector<double> weights;  // positive, sum to 2

  std::size_t size() const { return points.size(); }
  int exact_degree() const { return 2 * static_cast<int>(points.size()) - 1; }

  // Supported sizes: 1 through 64. Nodes are polished to |P_n(x)| tolerance
  // 1e-14 and come out symmetric about 0 by construction.
  static QuadratureRule gauss_legendre(std::size_t npoints);
};

// Affine image of a reference rule on [x0, x1].
struct MappedQuadrature {
  std::vector<double> points;
  std::vector<double> weights;
};

MappedQuadrature map_to_interval(const QuadratureRule& rule, double x0,
                                 double x1);

}  // namespace hadfem
