// AVX2 variants of the dense kernels. This translation unit is compiled with
// -mavx2 on x86_64 targets only; everywhere else it degrades to a null table.
//
// The elementwise kernels use plain mul/add (no fma), so each lane performs
// exactly the operation the scalar backend performs and results are
// bit-identical. The reductions accumulate in four independent lanes and are
// therefore only equal to the scalar result up to rounding.

#include "hadfem/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace hadfem::kernels {

namespace {

void mul_ew_avx2(const double* a, const double* b, double* out,
                 std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, vb));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_avx2(double s, const double* x, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = s * x[i];
}

void scale_rows_avx2(const double* a, const double* v, double* out,
                     std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r)
    scale_avx2(v[r], a + r * cols, out + r * cols, cols);
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, prod);
  }
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d sum2 = _mm_add_pd(lo, hi);
  __m128d sum1 = _mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2));
  double total = _mm_cvtsd_f64(sum1);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void matvec_avx2(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_avx2(a + r * cols, x, cols);
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops ops = {mul_ew_avx2,     scale_avx2, scale_rows_avx2,
                          axpy_avx2,       dot_avx2,   matvec_avx2};
  return &ops;
}

}  // namespace hadfem::kernels

#else

namespace hadfem::kernels {

const Ops* avx2_ops() { return nullptr; }

}  // namespace hadfem::kernels

#endif
