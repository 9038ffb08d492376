// AVX2 variants of the arithmetic kernels. This translation unit is compiled
// with -mavx2 and only entered after the dispatcher has confirmed CPU
// support. Coefficients are in {-1, 0, +1}, so the products reduce to two
// masked accumulations (add where c > 0, subtract where c < 0); the integer
// kernels are exactly equivalent to the scalar reference, the double kernels
// use a fixed 4-lane reduction tree.

#if defined(MDIST_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstring>

#include "mdist/kernels.hpp"

namespace mdist::kernels::avx2 {

namespace {

inline __m256i load_coeff64(const std::int8_t* c) {
  std::int32_t packed;
  std::memcpy(&packed, c, 4);
  return _mm256_cvtepi8_epi64(_mm_cvtsi32_si128(packed));
}

inline std::int64_t hsum_epi64(__m256i v) {
  alignas(32) std::int64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

inline double hsum_pd(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

std::int64_t dot_i64(const std::int64_t* row, const std::int8_t* coeff,
                     std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + i));
    const __m256i c = load_coeff64(coeff + i);
    const __m256i pos = _mm256_cmpgt_epi64(c, zero);
    const __m256i neg = _mm256_cmpgt_epi64(zero, c);
    acc = _mm256_add_epi64(acc, _mm256_and_si256(v, pos));
    acc = _mm256_sub_epi64(acc, _mm256_and_si256(v, neg));
  }
  std::int64_t sum = hsum_epi64(acc);
  for (; i < n; ++i) {
    if (coeff[i] > 0)
      sum += row[i];
    else if (coeff[i] < 0)
      sum -= row[i];
  }
  return sum;
}

double dot_f64(const double* row, const std::int8_t* coeff, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(row + i);
    const __m256i c = load_coeff64(coeff + i);
    const __m256d pos = _mm256_castsi256_pd(_mm256_cmpgt_epi64(c, zero));
    const __m256d neg = _mm256_castsi256_pd(_mm256_cmpgt_epi64(zero, c));
    acc = _mm256_add_pd(acc, _mm256_and_pd(v, pos));
    acc = _mm256_sub_pd(acc, _mm256_and_pd(v, neg));
  }
  double sum = hsum_pd(acc);
  for (; i < n; ++i) {
    if (coeff[i] > 0)
      sum += row[i];
    else if (coeff[i] < 0)
      sum -= row[i];
  }
  return sum;
}

std::uint64_t mismatch_i64(const std::int64_t* a, const std::int64_t* b,
                           std::size_t n) {
  std::uint64_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i va =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const int eq = _mm256_movemask_pd(
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(va, vb)));
    count += 4 - static_cast<unsigned>(__builtin_popcount(eq & 0xF));
  }
  for (; i < n; ++i) count += (a[i] != b[i]);
  return count;
}

std::uint64_t mismatch_f64(const double* a, const double* b, double tol,
                           std::size_t n) {
  const __m256d vtol = _mm256_set1_pd(tol);
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(
      static_cast<long long>(0x7fffffffffffffffULL)));
  std::uint64_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d diff =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d mag = _mm256_and_pd(diff, absmask);
    const int gt = _mm256_movemask_pd(_mm256_cmp_pd(mag, vtol, _CMP_GT_OQ));
    count += static_cast<unsigned>(__builtin_popcount(gt & 0xF));
  }
  for (; i < n; ++i) count += (std::fabs(a[i] - b[i]) > tol);
  return count;
}

}  // namespace mdist::kernels::avx2

#endif  // MDIST_HAVE_AVX2
