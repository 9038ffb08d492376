#include "mdist/kernels.hpp"

#include <cmath>

namespace mdist::kernels::scalar {

std::int64_t dot_i64(const std::int64_t* row, const std::int8_t* coeff,
                     std::size_t n) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int8_t c = coeff[i];
    if (c > 0)
      acc += row[i];
    else if (c < 0)
      acc -= row[i];
  }
  return acc;
}

double dot_f64(const double* row, const std::int8_t* coeff, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int8_t c = coeff[i];
    if (c > 0)
      acc += row[i];
    else if (c < 0)
      acc -= row[i];
  }
  return acc;
}

std::uint64_t mismatch_i64(const std::int64_t* a, const std::int64_t* b,
                           std::size_t n) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += (a[i] != b[i]);
  return count;
}

std::uint64_t mismatch_f64(const double* a, const double* b, double tol,
                           std::size_t n) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += (std::fabs(a[i] - b[i]) > tol);
  return count;
}

}  // namespace mdist::kernels::scalar
