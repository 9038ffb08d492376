#include "mdist/refcheck.hpp"

#include <cmath>
#include <stdexcept>

namespace mdist::refcheck {

namespace {

void check_pair(const Matrix& a, const Matrix& b) {
  if (a.n() != b.n())
    throw std::invalid_argument("matrix dimensions must match");
}

bool entries_differ(const Matrix& a, const Matrix& b, index_t i, index_t j,
                    double tol) {
  if (a.mode() == EntryMode::integer && b.mode() == EntryMode::integer)
    return a.geti(i, j) != b.geti(i, j);
  return std::fabs(a.value(i, j) - b.value(i, j)) > tol;
}

}  // namespace

std::uint64_t exact_matrix_distance(const Matrix& a, const Matrix& b,
                                    double tol) {
  check_pair(a, b);
  std::uint64_t d = 0;
  for (index_t i = 0; i < a.n(); ++i) d += exact_row_distance(a, b, i, tol);
  return d;
}

std::uint64_t exact_row_distance(const Matrix& a, const Matrix& b, index_t i,
                                 double tol) {
  check_pair(a, b);
  std::uint64_t d = 0;
  for (index_t j = 0; j < a.n(); ++j) d += entries_differ(a, b, i, j, tol);
  return d;
}

std::uint64_t exact_row_distance(const Matrix& a, const Matrix& b, index_t i,
                                 const IndexView& S, double tol) {
  check_pair(a, b);
  std::uint64_t d = 0;
  for (std::uint64_t p = 0; p < S.size(); ++p)
    d += entries_differ(a, b, i, S[p], tol);
  return d;
}

std::vector<index_t> exact_mismatch_columns(const Matrix& a, const Matrix& b,
                                            index_t i, double tol) {
  check_pair(a, b);
  std::vector<index_t> out;
  for (index_t j = 0; j < a.n(); ++j)
    if (entries_differ(a, b, i, j, tol)) out.push_back(j);
  return out;
}

BucketPartition exact_bucket_partition(const Matrix& a, const Matrix& b,
                                       double epsilon, double tol) {
  check_pair(a, b);
  const index_t n = a.n();
  BucketPartition out;
  out.ratio = 1.0 + epsilon / 50.0;

  // smallest t with ratio^t >= n, plus a top bucket
  int t = 1;
  double power = out.ratio;
  while (power < static_cast<double>(n)) {
    power *= out.ratio;
    ++t;
  }
  out.t = t + 1;

  out.bucket_of.assign(n, 0);
  out.sizes.assign(static_cast<std::size_t>(out.t) + 1, 0);
  out.distance = 0;
  for (index_t i = 0; i < n; ++i) {
    const std::uint64_t d = exact_row_distance(a, b, i, tol);
    out.distance += d;
    int k = 0;
    if (d >= 1) {
      k = 1;
      double hi = out.ratio;
      while (static_cast<double>(d) >= hi) {
        hi *= out.ratio;
        ++k;
      }
    }
    out.bucket_of[i] = k;
    out.sizes[static_cast<std::size_t>(k)] += 1;
  }
  out.weighted_sum = 0;
  for (int k = 1; k <= out.t; ++k)
    out.weighted_sum +=
        static_cast<double>(out.sizes[static_cast<std::size_t>(k)]) *
        std::pow(out.ratio, k);
  const auto dd = static_cast<double>(out.distance);
  out.lower = (1.0 - epsilon / 50.0) * dd;
  out.upper = (1.0 + epsilon / 50.0) * (1.0 + epsilon / 50.0) * dd;
  const double slack = 1e-9 * std::max(1.0, dd);
  out.sandwich_ok =
      out.lower <= out.weighted_sum + slack && out.weighted_sum <= out.upper + slack;
  return out;
}

}  // namespace mdist::refcheck
