#include "mdist/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace mdist::kernels {

namespace {

struct Vtable {
  std::int64_t (*dot_i64)(const std::int64_t*, const std::int8_t*,
                          std::size_t);
  double (*dot_f64)(const double*, const std::int8_t*, std::size_t);
  std::uint64_t (*mismatch_i64)(const std::int64_t*, const std::int64_t*,
                                std::size_t);
  std::uint64_t (*mismatch_f64)(const double*, const double*, double,
                                std::size_t);
};

constexpr Vtable kScalar{scalar::dot_i64, scalar::dot_f64,
                         scalar::mismatch_i64, scalar::mismatch_f64};

#if defined(MDIST_HAVE_AVX2)
constexpr Vtable kAvx2{avx2::dot_i64, avx2::dot_f64, avx2::mismatch_i64,
                       avx2::mismatch_f64};
#endif

bool cpu_has_avx2() {
#if defined(MDIST_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend pick_startup_backend() {
  if (const char* env = std::getenv("MDIST_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && backend_available(Backend::avx2)) return Backend::avx2;
    // unknown or unavailable request: fall through to autodetect
  }
  return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

struct State {
  Backend backend;
  const Vtable* vt;
  State() {
    backend = pick_startup_backend();
    vt = table_for(backend);
  }
  static const Vtable* table_for(Backend b) {
#if defined(MDIST_HAVE_AVX2)
    if (b == Backend::avx2) return &kAvx2;
#endif
    (void)b;
    return &kScalar;
  }
};

State& state() {
  static State s;
  return s;
}

}  // namespace

Backend active_backend() { return state().backend; }

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2();
  }
  return false;
}

void select_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument("kernel backend not available: " +
                                std::string(backend_name(b)));
  state().backend = b;
  state().vt = State::table_for(b);
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "?";
}

std::int64_t dot_i64(const std::int64_t* row, const std::int8_t* coeff,
                     std::size_t n) {
  return state().vt->dot_i64(row, coeff, n);
}

double dot_f64(const double* row, const std::int8_t* coeff, std::size_t n) {
  return state().vt->dot_f64(row, coeff, n);
}

std::uint64_t mismatch_i64(const std::int64_t* a, const std::int64_t* b,
                           std::size_t n) {
  return state().vt->mismatch_i64(a, b, n);
}

std::uint64_t mismatch_f64(const double* a, const double* b, double tol,
                           std::size_t n) {
  return state().vt->mismatch_f64(a, b, tol, n);
}

}  // namespace mdist::kernels
