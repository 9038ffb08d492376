#pragma once

// Brute-force ground truth used by tests and the CLI verify subcommand.
// Deterministic, query-free, deliberately written as plain scans that stay
// independent of the production kernels and oracle path they are checking.

#include <cstdint>
#include <vector>

#include "mdist/index_view.hpp"
#include "mdist/matrix.hpp"

namespace mdist::refcheck {

std::uint64_t exact_matrix_distance(const Matrix& a, const Matrix& b,
                                    double tol = 0.0);

std::uint64_t exact_row_distance(const Matrix& a, const Matrix& b, index_t i,
                                 double tol = 0.0);
std::uint64_t exact_row_distance(const Matrix& a, const Matrix& b, index_t i,
                                 const IndexView& S, double tol = 0.0);

/// Columns where rows i of a and b differ.
std::vector<index_t> exact_mismatch_columns(const Matrix& a, const Matrix& b,
                                            index_t i, double tol = 0.0);

/// Buckets every row by its true distance at ratio 1 + epsilon/50 and checks
/// the weighted-size sandwich around the true matrix distance.
struct BucketPartition {
  double ratio = 1.0;
  int t = 0;
  std::vector<int> bucket_of;         // per row; 0 = zero-bucket sentinel
  std::vector<std::uint64_t> sizes;   // [0..t], sizes[0] = zero bucket
  double weighted_sum = 0;            // sum_k |Y_k| ratio^k
  std::uint64_t distance = 0;         // true matrix distance
  double lower = 0, upper = 0;        // (1-eps/50) D and (1+eps/50)^2 D
  bool sandwich_ok = false;
};

BucketPartition exact_bucket_partition(const Matrix& a, const Matrix& b,
                                       double epsilon, double tol = 0.0);

}  // namespace mdist::refcheck
