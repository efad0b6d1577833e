#pragma once

#include "hadfem/dense.hpp"

namespace hadfem {

// Quadratic algebraic system in Hadamard form:
//   (A x) .* (B x) + D x = b
// Construction validates shapes and rejects non-finite entries, so solvers
// can attribute any NaN they meet to the iterate rather than the data.
struct HadamardSystem {
  Matrix A, B, D;
  Vector b;

  HadamardSystem(Matrix A_, Matrix B_, Matrix D_, Vector b_);
  std::size_t dim() const { return b.size(); }
};

// The same system with the quadratic term held as an n x n^2 tensor acting
// on x (x) x, using the ordering (x (x) x)[i*n + j] = x[i] * x[j]:
//   D x + G (x (x) x) = b
struct KroneckerSystem {
  Matrix D, G;
  Vector b;

  KroneckerSystem(Matrix D_, Matrix G_, Vector b_);
  std::size_t dim() const { return b.size(); }
};

Vector residual(const HadamardSystem& sys, const Vector& x);
Vector residual(const KroneckerSystem& sys, const Vector& x);

// d residual / d x. For the Hadamard form this is
//   diag(B x) A + diag(A x) B + D,
// assembled from the stored matrices without any quadrature.
Matrix jacobian(const HadamardSystem& sys, const Vector& x);
Matrix jacobian(const KroneckerSystem& sys, const Vector& x);

}  // namespace hadfem
