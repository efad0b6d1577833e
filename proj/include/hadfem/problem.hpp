#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hadfem/basis.hpp"

namespace hadfem {

using ScalarField = std::function<double(double)>;

// One term c(x) * u^(order) of a linear differential operator.
// coeff_degree is the polynomial degree of c when known (nullopt otherwise);
// it feeds the quadrature-exactness bookkeeping and nothing else.
struct OperatorTerm {
  ScalarField coeff;
  int order = 0;
  std::optional<int> coeff_degree;

  static OperatorTerm constant(double c, int order);
};

// Sum of OperatorTerms. Orders 0..2 are allowed with at most one
// second-order term; the factors of a product of operators are restricted
// to orders 0..1 at the Problem level, where that rule belongs.
class LinearOperator {
 public:
  LinearOperator() = default;  // the zero operator
  explicit LinearOperator(std::vector<OperatorTerm> terms);

  static LinearOperator zero() { return LinearOperator(); }
  static LinearOperator identity(double c = 1.0);
  static LinearOperator first_derivative(double c = 1.0);
  static LinearOperator second_derivative(double c);

  const std::vector<OperatorTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int max_order() const;
  const OperatorTerm* second_order_term() const;

  // Pointwise application given u, u', u'' at x.
  double apply(double u, double du, double d2u, double x) const;

 private:
  std::vector<OperatorTerm> terms_;
};

enum class BcKind { dirichlet, neumann };

struct BoundaryCondition {
  BcKind kind = BcKind::dirichlet;
  double value = 0.0;

  static BoundaryCondition dirichlet(double v) { return {BcKind::dirichlet, v}; }
  // value is the outward normal derivative datum: -u'(a) on the left,
  // +u'(b) on the right.
  static BoundaryCondition neumann(double v) { return {BcKind::neumann, v}; }
};

struct BoundarySpec {
  BoundaryCondition left = BoundaryCondition::dirichlet(0.0);
  BoundaryCondition right = BoundaryCondition::dirichlet(0.0);
};

// Continuous statement p(u) * q(u) + l(u) = f on a 1-D domain. p and q are
// the factors of the quadratic term; either may be the zero operator, which
// removes the product entirely (a plain linear problem).
struct Problem {
  LinearOperator p, q, l;
  ScalarField f;
  std::optional<int> f_degree;  // polynomial degree of f when known
  Domain1D domain;
  BoundarySpec bc;

  bool has_product() const { return !p.is_zero() && !q.is_zero(); }

  // Enforces: f present; product factors of order <= 1 (a second derivative
  // inside a product admits no integration by parts against C0 bases).
  void validate() const;
};

// Counts integrand evaluations: one tick is one term of one weighted
// residual evaluated at one quadrature point. Boundary-point evaluations
// are not quadrature and never tick.
class QuadCounter {
 public:
  void add(std::uint64_t n = 1) { ticks_ += n; }
  std::uint64_t value() const { return ticks_; }
  void reset() { ticks_ = 0; }

 private:
  std::uint64_t ticks_ = 0;
};

}  // namespace hadfem
