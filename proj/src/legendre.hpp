#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace hadfem::detail {

// Fills p[k] = P_k(x) and dp[k] = P_k'(x) for k = 0..nmax using the
// three-term recurrences; valid for all x including the endpoints.
inline void legendre_upto(std::size_t nmax, double x, std::vector<double>& p,
                          std::vector<double>& dp) {
  p.resize(nmax + 1);
  dp.resize(nmax + 1);
  p[0] = 1.0;
  dp[0] = 0.0;
  if (nmax == 0) return;
  p[1] = x;
  dp[1] = 1.0;
  for (std::size_t k = 1; k < nmax; ++k) {
    const double kk = static_cast<double>(k);
    p[k + 1] = ((2.0 * kk + 1.0) * x * p[k] - kk * p[k - 1]) / (kk + 1.0);
    dp[k + 1] = dp[k - 1] + (2.0 * kk + 1.0) * p[k];
  }
}

// (P_n(x), P_n'(x)) for a single degree.
inline std::pair<double, double> legendre_pd(std::size_t n, double x) {
  if (n == 0) return {1.0, 0.0};
  double pm1 = 1.0, dpm1 = 0.0;  // P_{k-1}
  double pk = x, dpk = 1.0;      // P_k
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double pnext = ((2.0 * kk + 1.0) * x * pk - kk * pm1) / (kk + 1.0);
    const double dpnext = dpm1 + (2.0 * kk + 1.0) * pk;
    pm1 = pk;
    dpm1 = dpk;
    pk = pnext;
    dpk = dpnext;
  }
  return {pk, dpk};
}

}  // namespace hadfem::detail
