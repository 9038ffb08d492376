#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace mdist::kernels {

// Arithmetic inner loops behind the oracle simulator and the reference
// checkers' hot paths. Scalar implementations are the reference; wider
// variants are selected at runtime and must agree with them (exactly for the
// integer kernels, to double rounding for the fused float reductions).

/// <row, coeff> where every coeff lies in {-1, 0, +1}.
std::int64_t dot_i64(const std::int64_t* row, const std::int8_t* coeff,
                     std::size_t n);
double dot_f64(const double* row, const std::int8_t* coeff, std::size_t n);

/// Number of positions where the arrays differ.
std::uint64_t mismatch_i64(const std::int64_t* a, const std::int64_t* b,
                           std::size_t n);
/// Float flavor: positions with |a-b| > tol.
std::uint64_t mismatch_f64(const double* a, const double* b, double tol,
                           std::size_t n);

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend b);
/// Throws std::invalid_argument if the backend is not available on this CPU
/// or was not compiled in. Environment variable MDIST_KERNELS=scalar|avx2
/// overrides the startup choice.
void select_backend(Backend b);
std::string_view backend_name(Backend b);

namespace scalar {
std::int64_t dot_i64(const std::int64_t* row, const std::int8_t* coeff,
                     std::size_t n);
double dot_f64(const double* row, const std::int8_t* coeff, std::size_t n);
std::uint64_t mismatch_i64(const std::int64_t* a, const std::int64_t* b,
                           std::size_t n);
std::uint64_t mismatch_f64(const double* a, const double* b, double tol,
                           std::size_t n);
}  // namespace scalar

#if defined(MDIST_HAVE_AVX2)
namespace avx2 {
std::int64_t dot_i64(const std::int64_t* row, const std::int8_t* coeff,
                     std::size_t n);
double dot_f64(const double* row, const std::int8_t* coeff, std::size_t n);
std::uint64_t mismatch_i64(const std::int64_t* a, const std::int64_t* b,
                           std::size_t n);
std::uint64_t mismatch_f64(const double* a, const double* b, double tol,
                           std::size_t n);
}  // namespace avx2
#endif

}  // namespace mdist::kernels
