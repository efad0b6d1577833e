#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace hadfem {

// Thrown when operand shapes are incompatible; the message names both shapes.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown by the LU factorization when a pivot falls below the singularity
// threshold. pivot_index() is the elimination step (0-based) that failed.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(std::size_t pivot_index, const std::string& what)
      : std::runtime_error(what), pivot_index_(pivot_index) {}
  std::size_t pivot_index() const { return pivot_index_; }

 private:
  std::size_t pivot_index_;
};

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : v_(n, fill) {}
  Vector(std::initializer_list<double> init) : v_(init) {}
  explicit Vector(std::vector<double> v) : v_(std::move(v)) {}

  std::size_t size() const { return v_.size(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  const std::vector<double>& values() const { return v_; }

  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  bool all_finite() const;

  Vector& operator+=(const Vector& rhs);
  Vector& operator-=(const Vector& rhs);
  Vector& operator*=(double s);

 private:
  std::vector<double> v_;
};

Vector operator+(Vector lhs, const Vector& rhs);
Vector operator-(Vector lhs, const Vector& rhs);
Vector operator*(double s, Vector v);

// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);

double dot(const Vector& a, const Vector& b);
double norm_inf(const Vector& v);
double norm_l2(const Vector& v);

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }
  double* row(std::size_t r) { return a_.data() + r * cols_; }
  const double* row(std::size_t r) const { return a_.data() + r * cols_; }

  bool all_finite() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);

// Elementwise (Hadamard) products; operands must have identical shapes.
Vector hadamard(const Vector& a, const Vector& b);
Matrix hadamard(const Matrix& a, const Matrix& b);

// Kronecker product of two vectors: result[i * y.size() + j] = x[i] * y[j].
Vector kron(const Vector& x, const Vector& y);

// diag(v) * a: scales row r of a by v[r]. v.size() must equal a.rows().
Matrix scale_rows(const Vector& v, const Matrix& a);

// y = a * x (shape-checked).
Vector matvec(const Matrix& a, const Vector& x);

// LU factorization with partial pivoting, PA = LU packed in one matrix.
class LuFactorization {
 public:
  // Throws SingularMatrixError when a pivot magnitude drops below
  // 1e-14 * max|a_ij| of the input matrix.
  explicit LuFactorization(const Matrix& a);

  Vector solve(const Vector& rhs) const;
  std::size_t dim() const { return lu_.rows(); }

  // Diagonal of U in elimination order. For a symmetric positive definite
  // input that needed no row swaps these are all positive.
  std::vector<double> pivots() const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

LuFactorization lu_factor(const Matrix& a);
Vector lu_solve(const Matrix& a, const Vector& rhs);

namespace detail {
std::string shape_str(std::size_t rows, std::size_t cols);
[[noreturn]] void throw_shape_mismatch(const char* op, std::size_t ar,
                                       std::size_t ac, std::size_t br,
                                       std::size_t bc);
}  // namespace detail

}  // namespace hadfem
