#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "mdist/kernels.hpp"
#include "mdist/rng.hpp"

namespace {

using namespace mdist;

struct Arrays {
  std::vector<std::int64_t> ai, bi;
  std::vector<double> ar, br;
  std::vector<std::int8_t> coeff;
};

Arrays random_arrays(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Arrays x;
  for (std::size_t i = 0; i < n; ++i) {
    // large magnitudes to exercise the 64-bit accumulation
    const auto v = static_cast<std::int64_t>(rng.below(1ull << 40)) -
                   (1ll << 39);
    x.ai.push_back(v);
    x.bi.push_back(rng.below(4) == 0 ? v + 1 : v);
    x.ar.push_back(static_cast<double>(v) * 0.5);
    x.br.push_back(rng.below(4) == 0 ? x.ar.back() + 0.25 : x.ar.back());
    x.coeff.push_back(static_cast<std::int8_t>(rng.below(3)) - 1);
  }
  return x;
}

std::int64_t naive_dot_i64(const Arrays& x) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < x.ai.size(); ++i)
    acc += x.ai[i] * static_cast<std::int64_t>(x.coeff[i]);
  return acc;
}

}  // namespace

TEST_CASE("scalar kernels match a naive evaluation") {
  for (const std::size_t n : {0ul, 1ul, 3ul, 4ul, 17ul, 64ul, 1000ul}) {
    const Arrays x = random_arrays(n, 1000 + n);
    CHECK(kernels::scalar::dot_i64(x.ai.data(), x.coeff.data(), n) ==
          naive_dot_i64(x));
    std::uint64_t mism = 0;
    for (std::size_t i = 0; i < n; ++i) mism += (x.ai[i] != x.bi[i]);
    CHECK(kernels::scalar::mismatch_i64(x.ai.data(), x.bi.data(), n) == mism);
    std::uint64_t mismf = 0;
    for (std::size_t i = 0; i < n; ++i)
      mismf += (std::fabs(x.ar[i] - x.br[i]) > 0.1);
    CHECK(kernels::scalar::mismatch_f64(x.ar.data(), x.br.data(), 0.1, n) ==
          mismf);
  }
}

TEST_CASE("runtime backend agrees with the scalar reference") {
  INFO("active backend: ",
       std::string(kernels::backend_name(kernels::active_backend())));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 1 + (seed * 37) % 530;
    const Arrays x = random_arrays(n, seed);
    CHECK(kernels::dot_i64(x.ai.data(), x.coeff.data(), n) ==
          kernels::scalar::dot_i64(x.ai.data(), x.coeff.data(), n));
    CHECK(kernels::mismatch_i64(x.ai.data(), x.bi.data(), n) ==
          kernels::scalar::mismatch_i64(x.ai.data(), x.bi.data(), n));
    CHECK(kernels::mismatch_f64(x.ar.data(), x.br.data(), 0.1, n) ==
          kernels::scalar::mismatch_f64(x.ar.data(), x.br.data(), 0.1, n));
    const double dv = kernels::dot_f64(x.ar.data(), x.coeff.data(), n);
    const double ds = kernels::scalar::dot_f64(x.ar.data(), x.coeff.data(), n);
    // reduction order differs between variants
    CHECK(dv == doctest::Approx(ds).epsilon(1e-12));
  }
}

#if defined(MDIST_HAVE_AVX2)
TEST_CASE("avx2 variant agrees exactly on the integer kernels") {
  if (!kernels::backend_available(kernels::Backend::avx2)) return;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const std::size_t n = 1 + (seed * 13) % 259;
    const Arrays x = random_arrays(n, seed);
    CHECK(kernels::avx2::dot_i64(x.ai.data(), x.coeff.data(), n) ==
          kernels::scalar::dot_i64(x.ai.data(), x.coeff.data(), n));
    CHECK(kernels::avx2::mismatch_i64(x.ai.data(), x.bi.data(), n) ==
          kernels::scalar::mismatch_i64(x.ai.data(), x.bi.data(), n));
  }
}
#endif

TEST_CASE("backend selection rejects unavailable targets") {
  const auto current = kernels::active_backend();
  kernels::select_backend(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
  if (!kernels::backend_available(kernels::Backend::avx2))
    CHECK_THROWS_AS(kernels::select_backend(kernels::Backend::avx2),
                    std::invalid_argument);
  kernels::select_backend(current);
}
