#include "hadfem/systems.hpp"

#include <stdexcept>
#include <string>

#include "hadfem/kernels.hpp"

namespace hadfem {

namespace {

void require_finite(bool ok, const char* name) {
  if (!ok)
    throw std::invalid_argument(std::string("system: ") + name +
                                " contains non-finite entries");
}

void require_square_n(const Matrix& m, std::size_t n, const char* name) {
  if (m.rows() != n || m.cols() != n)
    throw ShapeError(std::string("system: ") + name + " must be " +
                     detail::shape_str(n, n) + ", got " +
                     detail::shape_str(m.rows(), m.cols()));
}

}  // namespace

HadamardSystem::HadamardSystem(Matrix A_, Matrix B_, Matrix D_, Vector b_)
    : A(std::move(A_)), B(std::move(B_)), D(std::move(D_)), b(std::move(b_)) {
  const std::size_t n = b.size();
  require_square_n(A, n, "A");
  require_square_n(B, n, "B");
  require_square_n(D, n, "D");
  require_finite(A.all_finite(), "A");
  require_finite(B.all_finite(), "B");
  require_finite(D.all_finite(), "D");
  require_finite(b.all_finite(), "b");
}

KroneckerSystem::KroneckerSystem(Matrix D_, Matrix G_, Vector b_)
    : D(std::move(D_)), G(std::move(G_)), b(std::move(b_)) {
  const std::size_t n = b.size();
  require_square_n(D, n, "D");
  if (G.rows() != n || G.cols() != n * n)
    throw ShapeError("system: G must be " + detail::shape_str(n, n * n) +
                     ", got " + detail::shape_str(G.rows(), G.cols()));
  require_finite(D.all_finite(), "D");
  require_finite(G.all_finite(), "G");
  require_finite(b.all_finite(), "b");
}

Vector residual(const HadamardSystem& sys, const Vector& x) {
  Vector r = hadamard(matvec(sys.A, x), matvec(sys.B, x));
  r += matvec(sys.D, x);
  r -= sys.b;
  return r;
}

Matrix jacobian(const HadamardSystem& sys, const Vector& x) {
  Matrix j = scale_rows(matvec(sys.B, x), sys.A);
  j += scale_rows(matvec(sys.A, x), sys.B);
  j += sys.D;
  return j;
}

Vector residual(const KroneckerSystem& sys, const Vector& x) {
  Vector r = matvec(sys.D, x);
  r += matvec(sys.G, kron(x, x));
  r -= sys.b;
  return r;
}

Matrix jacobian(const KroneckerSystem& sys, const Vector& x) {
  const std::size_t n = sys.dim();
  Matrix j = sys.D;
  const auto& ops = kernels::active();
  for (std::size_t r = 0; r < n; ++r) {
    const double* grow = sys.G.row(r);
    for (std::size_t c = 0; c < n; ++c) {
      // d/dx_c of sum_{i,k} G[r, i*n+k] x_i x_k: column block c*n+* catches
      // i = c, the strided entries i*n+c catch k = c.
      double acc = ops.dot(grow + c * n, x.data(), n);
      for (std::size_t i = 0; i < n; ++i) acc += grow[i * n + c] * x[i];
      j(r, c) += acc;
    }
  }
  return j;
}

}  // namespace hadfem
