#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hadfem/dense.hpp"

namespace hadfem {

struct Domain1D {
  double a = 0.0;
  double b = 1.0;
  double length() const { return b - a; }
};

enum class BasisKind { fe_hat, modal_poly };

// A set of trial/weight functions on a 1-D domain. Galerkin throughout: the
// same set serves as both trial and weight space.
//
// fe_hat: piecewise-linear hat functions on a node set, one per node. At an
// interior node the derivative takes its right-limit value; at the right
// domain endpoint the left limit is used.
//
// modal_poly: Legendre polynomials mapped to the domain. Optionally adapted
// so that every function vanishes at an end that carries an essential
// condition (degree-k combinations of P_k), which keeps the set hierarchical
// while making elimination-style boundary handling possible.
class BasisSet {
 public:
  static BasisSet fe_hat(const Domain1D& dom, std::size_t n_nodes);
  static BasisSet fe_hat(std::vector<double> nodes);
  static BasisSet modal(const Domain1D& dom, std::size_t n);
  static BasisSet modal_adapted(const Domain1D& dom, std::size_t n,
                                bool zero_left, bool zero_right);

  BasisKind kind() const { return kind_; }
  std::size_t size() const { return size_; }
  const Domain1D& domain() const { return dom_; }

  // fe_hat only; throws std::logic_error for modal sets.
  const std::vector<double>& nodes() const;

  bool zero_at_left() const { return zero_left_; }
  bool zero_at_right() const { return zero_right_; }

  // deriv in {0, 1}. x outside [a, b] throws std::domain_error.
  double eval(std::size_t j, double x, int deriv = 0) const;

  // Values and first derivatives of every basis function at x in one pass.
  void eval_all(double x, std::vector<double>& vals,
                std::vector<double>& ders) const;
  double eval_expansion(std::span<const double> coeffs, double x,
                        int deriv = 0) const;
  double eval_expansion(const Vector& coeffs, double x, int deriv = 0) const {
    return eval_expansion(std::span<const double>(coeffs.data(), coeffs.size()),
                          x, deriv);
  }

 private:
  BasisSet() = default;

  void check_point(double x, int deriv) const;
  std::size_t element_of(double x) const;  // fe_hat

  BasisKind kind_ = BasisKind::fe_hat;
  Domain1D dom_;
  std::size_t size_ = 0;
  std::vector<double> nodes_;  // fe_hat
  bool zero_left_ = false;     // modal adaptation flags
  bool zero_right_ = false;
};

}  // namespace hadfem
