#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>

#include "mdist/oracle.hpp"
#include "mdist/rng.hpp"
#include "mdist/rowdist.hpp"

namespace mdist::sampler {

/// Raised when both root-level child estimates are zero: no mismatch is
/// detectable in the row, so there is nothing to sample.
struct EmptyRow : std::runtime_error {
  explicit EmptyRow(index_t row_index)
      : std::runtime_error("no detectable mismatch in row " +
                           std::to_string(row_index)),
        row(row_index) {}
  index_t row;
};

/// Index (0-based) of the dyadic interval of level `level` containing
/// column `ell`, over a universe padded to n_padded = 2^levels. Level 0 is
/// the whole universe; level log2(n_padded) pins the column itself.
index_t hier_locate(index_t ell, int level, std::uint64_t n_padded);

struct SamplerParams {
  double alpha = 0.1;
  double delta = 0.1;

  /// Per-level accuracy divider: child distances are estimated at
  /// alpha / (c * log2 n). 50 is the conforming value; desk-scale presets
  /// may lower it for speed (flagged non-conforming in reports).
  double subdivide_constant = 50.0;

  /// Template for the inner distance estimates (alpha/delta overridden).
  rowdist::RowDistParams row;

  /// Test hook: when set, replaces the oracle-backed restricted-distance
  /// estimate (e.g. with an exact reference), letting tests isolate the
  /// descent logic.
  std::function<double(index_t i, const IndexView& S)> distance_fn;

  int max_exact_retries = 3;
};

/// Draws a (1 +- alpha)-uniform mismatch column of row i (uniform over the
/// set of columns where rows i of A and B differ), with probability
/// >= 1 - delta over the internal estimates. Descends the dyadic hierarchy,
/// calling the restricted distance estimator on both children at every level
/// and branching proportionally to the two estimates. The returned column is
/// always a true mismatch (estimates are one-sided). Throws EmptyRow when
/// the row looks identical at the root; when both child estimates vanish
/// below a node already known nonzero, falls back to exact recovery on that
/// node and samples uniformly from the recovered set.
index_t approx_sample(const OraclePair& pair, index_t i,
                      const SamplerParams& sp, RngBundle& rngs);

}  // namespace mdist::sampler
