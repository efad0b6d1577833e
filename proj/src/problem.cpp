#include "hadfem/problem.hpp"

#include <stdexcept>
#include <string>

namespace hadfem {

OperatorTerm OperatorTerm::constant(double c, int order) {
  return {[c](double) { return c; }, order, 0};
}

LinearOperator::LinearOperator(std::vector<OperatorTerm> terms)
    : terms_(std::move(terms)) {
  int n_second = 0;
  for (const auto& t : terms_) {
    if (!t.coeff)
      throw std::invalid_argument("operator term: missing coefficient");
    if (t.order < 0 || t.order > 2)
      throw std::invalid_argument("operator term: order must be 0, 1 or 2, got " +
                                  std::to_string(t.order));
    if (t.order == 2) ++n_second;
  }
  if (n_second > 1)
    throw std::invalid_argument(
        "operator: at most one second-order term is supported");
}

LinearOperator LinearOperator::identity(double c) {
  return LinearOperator({OperatorTerm::constant(c, 0)});
}

LinearOperator LinearOperator::first_derivative(double c) {
  return LinearOperator({OperatorTerm::constant(c, 1)});
}

LinearOperator LinearOperator::second_derivative(double c) {
  return LinearOperator({OperatorTerm::constant(c, 2)});
}

int LinearOperator::max_order() const {
  int m = -1;
  for (const auto& t : terms_) m = std::max(m, t.order);
  return m;
}

const OperatorTerm* LinearOperator::second_order_term() const {
  for (const auto& t : terms_)
    if (t.order == 2) return &t;
  return nullptr;
}

double LinearOperator::apply(double u, double du, double d2u, double x) const {
  double acc = 0.0;
  for (const auto& t : terms_) {
    const double v = t.order == 0 ? u : (t.order == 1 ? du : d2u);
    acc += t.coeff(x) * v;
  }
  return acc;
}

void Problem::validate() const {
  if (!f) throw std::invalid_argument("problem: forcing term f is required");
  if (!(domain.a < domain.b))
    throw std::invalid_argument("problem: domain requires a < b");
  if (has_product()) {
    if (p.max_order() > 1 || q.max_order() > 1)
      throw std::invalid_argument(
          "problem: product factors may involve u and u' only; put second "
          "derivatives in the linear part");
  }
  const bool any_neumann = bc.left.kind == BcKind::neumann ||
                           bc.right.kind == BcKind::neumann;
  const bool any_dirichlet = bc.left.kind == BcKind::dirichlet ||
                             bc.right.kind == BcKind::dirichlet;
  if (any_neumann && !l.second_order_term())
    throw std::invalid_argument(
        "problem: Neumann data is a flux datum and requires a second-order "
        "term in the linear part");
  if (l.second_order_term() && !any_dirichlet)
    throw std::invalid_argument(
        "problem: a second-order linear part needs at least one Dirichlet "
        "condition to pin the solution");
}

}  // namespace hadfem
