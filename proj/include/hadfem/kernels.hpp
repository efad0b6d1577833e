#pragma once

#include <cstddef>
#include <string_view>

namespace hadfem::kernels {

enum class Backend { scalar, avx2 };

// Function table for the dense inner loops. The scalar entries are the
// reference semantics; vectorized backends must match them bit for bit on
// the elementwise kernels (mul_ew, scale, scale_rows, axpy) and to rounding
// accuracy on the reductions (dot, matvec), which may reassociate.
struct Ops {
  // out[i] = a[i] * b[i]
  void (*mul_ew)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = s * x[i]
  void (*scale)(double s, const double* x, double* out, std::size_t n);
  // out[r,c] = v[r] * a[r,c] for a row-major rows x cols matrix
  void (*scale_rows)(const double* a, const double* v, double* out,
                     std::size_t rows, std::size_t cols);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[r] = sum_c a[r,c] * x[c] for a row-major rows x cols matrix
  void (*matvec)(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y);
};

// Currently selected table. Defaults to the widest backend the CPU supports;
// the HADFEM_KERNELS environment variable ("scalar", "avx2", "auto") overrides
// the default at first use.
const Ops& active();
Backend active_backend();

bool available(Backend b);

// Overrides auto-detection, e.g. to cross-check backends in tests.
// Throws std::invalid_argument if the backend is not available on this CPU.
void force_backend(Backend b);

std::string_view backend_name(Backend b);

const Ops& scalar_ops();

// Null when compiled without AVX2 support or when the CPU lacks it.
const Ops* avx2_ops();

}  // namespace hadfem::kernels
