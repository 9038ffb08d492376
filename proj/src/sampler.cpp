#include "mdist/sampler.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "mdist/errors.hpp"

namespace mdist::sampler {

index_t hier_locate(index_t ell, int level, std::uint64_t n_padded) {
  if (n_padded == 0 || (n_padded & (n_padded - 1)) != 0)
    throw std::invalid_argument("padded universe must be a power of two");
  const int logn = std::bit_width(n_padded) - 1;
  if (level < 0 || level > logn)
    throw std::out_of_range("hierarchy level out of range");
  if (ell >= n_padded) throw std::out_of_range("column index out of range");
  return static_cast<index_t>(ell >> (logn - level));
}

namespace {

index_t recover_from_node(const OraclePair& pair, index_t i, std::uint64_t lo,
                          std::uint64_t hi, double delta,
                          const SamplerParams& sp, RngBundle& rngs) {
  const std::uint64_t n = pair.n();
  const IndexView node =
      IndexView::range(std::min(lo, n), std::min(hi, n));
  for (int attempt = 0; attempt < std::max(1, sp.max_exact_retries);
       ++attempt) {
    const auto cols = rowdist::exact_mismatches(pair, i, node, delta,
                                                rngs.signs);
    if (!cols.empty()) return cols[rngs.descent.below(cols.size())];
  }
  // a node only reaches here after a nonzero (hence true) estimate, so the
  // mismatch exists; repeated recovery misses have vanishing probability
  throw InternalError("mismatch recovery failed below a nonzero node");
}

}  // namespace

index_t approx_sample(const OraclePair& pair, index_t i,
                      const SamplerParams& sp, RngBundle& rngs) {
  const index_t n = pair.n();
  if (i >= n) throw std::out_of_range("row index out of range");
  const std::uint64_t nbar = std::bit_ceil<std::uint64_t>(n);
  const int levels = std::bit_width(nbar) - 1;
  const double denom =
      std::max(1.0, sp.subdivide_constant * std::max(1, levels));

  rowdist::RowDistParams rp = sp.row;
  rp.alpha = sp.alpha / denom;
  rp.delta = sp.delta / denom;

  auto child_distance = [&](std::uint64_t lo, std::uint64_t hi) -> double {
    const IndexView S = IndexView::range(std::min<std::uint64_t>(lo, n),
                                         std::min<std::uint64_t>(hi, n));
    if (sp.distance_fn) return sp.distance_fn(i, S);
    return rowdist::estimate_row_distance(pair, i, S, rp, rngs);
  };

  if (levels == 0) {
    if (child_distance(0, 1) <= 0.0) throw EmptyRow(i);
    return 0;
  }

  std::uint64_t lo = 0, hi = nbar;
  for (int level = 1; level <= levels; ++level) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    const double d_left = child_distance(lo, mid);
    const double d_right = child_distance(mid, hi);
    if (d_left <= 0.0 && d_right <= 0.0) {
      if (level == 1) throw EmptyRow(i);
      return recover_from_node(pair, i, lo, hi, rp.delta, sp, rngs);
    }
    if (rngs.descent.uniform01() * (d_left + d_right) < d_left)
      hi = mid;
    else
      lo = mid;
  }
  // padded tail columns are never selected: their views are empty and
  // estimate to zero
  if (lo >= n)
    throw InternalError("descent landed in the padded tail");
  return static_cast<index_t>(lo);
}

}  // namespace mdist::sampler
