#include "hadfem/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hadfem/kernels.hpp"

namespace hadfem {

namespace detail {

std::string shape_str(std::size_t rows, std::size_t cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

void throw_shape_mismatch(const char* op, std::size_t ar, std::size_t ac,
                          std::size_t br, std::size_t bc) {
  throw ShapeError(std::string(op) + ": incompatible shapes " +
                   shape_str(ar, ac) + " and " + shape_str(br, bc));
}

namespace {

void check_same_size(const char* op, const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    throw_shape_mismatch(op, a.size(), 1, b.size(), 1);
}

void check_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw_shape_mismatch(op, a.rows(), a.cols(), b.rows(), b.cols());
}

}  // namespace
}  // namespace detail

bool Vector::all_finite() const {
  return std::all_of(v_.begin(), v_.end(),
                     [](double x) { return std::isfinite(x); });
}

Vector& Vector::operator+=(const Vector& rhs) {
  detail::check_same_size("vector add", *this, rhs);
  kernels::active().axpy(1.0, rhs.data(), data(), size());
  return *this;
}

Vector& Vector::operator-=(const Vector& rhs) {
  detail::check_same_size("vector subtract", *this, rhs);
  kernels::active().axpy(-1.0, rhs.data(), data(), size());
  return *this;
}

Vector& Vector::operator*=(double s) {
  kernels::active().scale(s, data(), data(), size());
  return *this;
}

Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
Vector operator*(double s, Vector v) { return v *= s; }

void axpy(double alpha, const Vector& x, Vector& y) {
  detail::check_same_size("axpy", x, y);
  kernels::active().axpy(alpha, x.data(), y.data(), y.size());
}

double dot(const Vector& a, const Vector& b) {
  detail::check_same_size("dot", a, b);
  return kernels::active().dot(a.data(), b.data(), a.size());
}

double norm_inf(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm_l2(const Vector& v) { return std::sqrt(dot(v, v)); }

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr ? rows.begin()->size() : 0;
  Matrix m(nr, nc);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != nc)
      throw ShapeError("from_rows: ragged row " + std::to_string(r) + " has " +
                       std::to_string(row.size()) + " entries, expected " +
                       std::to_string(nc));
    std::copy(row.begin(), row.end(), m.row(r));
    ++r;
  }
  return m;
}

bool Matrix::all_finite() const {
  return std::all_of(a_.begin(), a_.end(),
                     [](double x) { return std::isfinite(x); });
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  detail::check_same_shape("matrix add", *this, rhs);
  kernels::active().axpy(1.0, rhs.data(), data(), a_.size());
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  detail::check_same_shape("matrix subtract", *this, rhs);
  kernels::active().axpy(-1.0, rhs.data(), data(), a_.size());
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }

Vector hadamard(const Vector& a, const Vector& b) {
  detail::check_same_size("hadamard", a, b);
  Vector out(a.size());
  kernels::active().mul_ew(a.data(), b.data(), out.data(), a.size());
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  detail::check_same_shape("hadamard", a, b);
  Matrix out(a.rows(), a.cols());
  kernels::active().mul_ew(a.data(), b.data(), out.data(),
                           a.rows() * a.cols());
  return out;
}

Vector kron(const Vector& x, const Vector& y) {
  Vector out(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    kernels::active().scale(x[i], y.data(), out.data() + i * y.size(),
                            y.size());
  return out;
}

Matrix scale_rows(const Vector& v, const Matrix& a) {
  if (v.size() != a.rows())
    detail::throw_shape_mismatch("scale_rows", v.size(), 1, a.rows(),
                                 a.cols());
  Matrix out(a.rows(), a.cols());
  kernels::active().scale_rows(a.data(), v.data(), out.data(), a.rows(),
                               a.cols());
  return out;
}

Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size())
    detail::throw_shape_mismatch("matvec", a.rows(), a.cols(), x.size(), 1);
  Vector y(a.rows());
  kernels::active().matvec(a.data(), a.rows(), a.cols(), x.data(), y.data());
  return y;
}

LuFactorization::LuFactorization(const Matrix& a) : lu_(a), perm_(a.rows()) {
  if (!a.square())
    throw ShapeError("lu_factor: matrix must be square, got " +
                     detail::shape_str(a.rows(), a.cols()));
  const std::size_t n = lu_.rows();
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});

  double amax = 0.0;
  for (std::size_t i = 0; i < n * n; ++i)
    amax = std::max(amax, std::abs(lu_.data()[i]));
  const double tiny = 1e-14 * amax;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::abs(lu_(i, k));
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best <= tiny || best == 0.0)
      throw SingularMatrixError(
          k, "lu_factor: numerically singular at pivot " + std::to_string(k) +
                 " (|pivot| = " + std::to_string(best) + ")");
    if (piv != k) {
      std::swap_ranges(lu_.row(k), lu_.row(k) + n, lu_.row(piv));
      std::swap(perm_[k], perm_[piv]);
    }
    const double inv = 1.0 / lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = lu_(i, k) * inv;
      lu_(i, k) = m;
      if (m != 0.0)
        kernels::active().axpy(-m, lu_.row(k) + k + 1, lu_.row(i) + k + 1,
                               n - k - 1);
    }
  }
}

Vector LuFactorization::solve(const Vector& rhs) const {
  const std::size_t n = dim();
  if (rhs.size() != n)
    detail::throw_shape_mismatch("lu_solve", n, n, rhs.size(), 1);
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
  // Forward substitution (unit lower triangle).
  for (std::size_t i = 1; i < n; ++i)
    x[i] -= kernels::active().dot(lu_.row(i), x.data(), i);
  // Back substitution.
  for (std::size_t ii = n; ii-- > 0;) {
    const double* row = lu_.row(ii);
    double acc = x[ii];
    acc -= kernels::active().dot(row + ii + 1, x.data() + ii + 1, n - ii - 1);
    x[ii] = acc / row[ii];
  }
  return x;
}

std::vector<double> LuFactorization::pivots() const {
  std::vector<double> d(dim());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = lu_(i, i);
  return d;
}

LuFactorization lu_factor(const Matrix& a) { return LuFactorization(a); }

Vector lu_solve(const Matrix& a, const Vector& rhs) {
  return LuFactorization(a).solve(rhs);
}

}  // namespace hadfem
