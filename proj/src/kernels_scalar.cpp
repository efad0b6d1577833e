#include "hadfem/kernels.hpp"

namespace hadfem::kernels {

namespace {

void mul_ew_scalar(const double* a, const double* b, double* out,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_scalar(double s, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = s * x[i];
}

void scale_rows_scalar(const double* a, const double* v, double* out,
                       std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double s = v[r];
    const double* arow = a + r * cols;
    double* orow = out + r * cols;
    for (std::size_t c = 0; c < cols; ++c) orow[c] = s * arow[c];
  }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void matvec_scalar(const double* a, std::size_t rows, std::size_t cols,
                   const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r)
    y[r] = dot_scalar(a + r * cols, x, cols);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {mul_ew_scalar,     scale_scalar, scale_rows_scalar,
                          axpy_scalar,       dot_scalar,   matvec_scalar};
  return ops;
}

}  // namespace hadfem::kernels
