#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mdist/oracle.hpp"
#include "mdist/rng.hpp"

namespace mdist::rowdist {

/// Tunables for the randomized row primitives.
struct RowDistParams {
  double alpha = 0.25;  // relative accuracy, in (0,1)
  double delta = 0.1;   // failure probability, in (0,1)

  /// Sign-vector repetitions per identity test; 0 derives
  /// ceil(log2(1/delta_q)) + 2 from the test's own failure budget.
  int jl_reps = 0;

  /// Random subsets per sampling level; 0 derives
  /// ceil(12 * ln(2m/delta) / alpha^2) from the universe size m.
  std::int64_t emptiness_trials = 0;

  /// Trials for the cheap level-location pass; 0 derives
  /// clamp(emptiness_trials / 8, 32, 128).
  std::int64_t locate_trials = 0;

  /// True distances are integers: round the estimate when the (1 +- alpha)
  /// window is narrower than +-0.5.
  bool integer_round = true;

  /// Allow switching to exact split-descent recovery when its predicted
  /// query cost undercuts the sampling budget. Disable to force the pure
  /// sampling path.
  bool allow_exact_path = true;
};

int auto_jl_reps(double delta);
std::int64_t auto_emptiness_trials(std::uint64_t m, double alpha, double delta);

/// One-sided identity test of rows i of A and B restricted to S: if the
/// restricted rows are identical it always answers true; if they differ it
/// answers false except with probability <= 2^-reps <= delta. Fresh random
/// sign vectors every call; each repetition costs one sign query per matrix.
bool identity_test(const OraclePair& pair, index_t i, const IndexView& S,
                   double delta, Rng& signs, int reps_override = 0);

/// Emptiness oracle over positions [0, m): answers "Q intersects the hidden
/// set?" for a queried position set. Must be one-sided when backed by
/// identity tests (a "nonempty" answer is always true).
using EmptinessFn = std::function<bool(const IndexView& positions)>;

struct SubsetSizeOptions {
  double alpha = 0.25;
  double delta = 0.1;
  std::int64_t trials = 0;        // 0 => auto_emptiness_trials(m, ...)
  std::int64_t locate_trials = 0; // 0 => derived from trials
  bool integer_round = true;
  bool allow_exact_path = true;
};

/// (1 +- alpha)-estimate of |X| for an unknown X given only emptiness
/// queries, with success probability >= 1 - delta (on the sampling side;
/// oracle failures are the caller's budget). Returns exactly 0 iff the
/// full-universe query answers empty. Geometric-rate scheme: at rate 2^-k
/// the empty fraction estimates (1-2^-k)^|X|; the smallest k whose fraction
/// lands in [1/4, 3/4] is refined with a second pass and inverted. When the
/// located magnitude makes exact split-descent recovery cheaper than the
/// refine pass, the exact count is returned instead.
double estimate_subset_size(const EmptinessFn& is_empty, std::uint64_t m,
                            const SubsetSizeOptions& opt, Rng& rng);

/// Exact recovery of the positions of the hidden set via split descent:
/// nonempty nodes split in half, nonempty singletons are reported. Output is
/// always a subset of the truth when the oracle is one-sided; it misses an
/// element only where a node query falsely answered empty. Ascending order.
std::vector<std::uint64_t> split_descent(const EmptinessFn& is_empty,
                                         std::uint64_t m);

/// (1 +- alpha)-approximation to the Hamming distance of rows i restricted
/// to S, with probability >= 1 - delta. Reduction: subset-size estimation
/// over universe S where the hidden set is the mismatch set, each emptiness
/// query answered by an identity test at failure budget delta / (2 q_max).
double estimate_row_distance(const OraclePair& pair, index_t i,
                             const IndexView& S, const RowDistParams& p,
                             RngBundle& rngs);

/// Full-row distance (S = [n]).
double estimate_row_distance(const OraclePair& pair, index_t i,
                             const RowDistParams& p, RngBundle& rngs);

/// Exactly the mismatch columns of row i within S, with probability
/// >= 1 - delta; always a subset of the true mismatch set.
std::vector<index_t> exact_mismatches(const OraclePair& pair, index_t i,
                                      const IndexView& S, double delta,
                                      Rng& signs);

}  // namespace mdist::rowdist
