#include "mdist/rowdist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "mdist/query_vec.hpp"

namespace mdist::rowdist {

namespace {

int ceil_log2(std::uint64_t m) {
  return m <= 1 ? 0 : std::bit_width(m - 1);
}

double clampd(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

// Reusable query-vector buffer: only previously written coordinates are
// cleared, so building a sparse query costs O(|support|), not O(n).
struct SignWorkspace {
  QueryVec vec;

  void prepare(index_t n, const IndexView& S) {
    if (vec.n != n) {
      vec.n = n;
      vec.coeff.assign(n, 0);
      vec.support.clear();
    } else {
      for (index_t j : vec.support) vec.coeff[j] = 0;
    }
    vec.kind = VecKind::sign;
    vec.restricted = true;
    vec.support.clear();
    vec.support.reserve(S.size());
    for (std::uint64_t p = 0; p < S.size(); ++p) vec.support.push_back(S[p]);
  }

  void randomize(Rng& signs) {
    for (index_t j : vec.support) vec.coeff[j] = signs.bit() ? 1 : -1;
  }
};

SignWorkspace& sign_ws() {
  thread_local SignWorkspace ws;
  return ws;
}

// Maps position ranks within S to actual column indices. Range positions
// over any S, or list positions over a range S, stay allocation-free or use
// the caller's scratch buffer.
IndexView positions_to_columns(const IndexView& S, const IndexView& pos,
                               std::vector<index_t>& scratch) {
  if (pos.is_range()) return S.slice(pos.lo(), pos.hi());
  scratch.clear();
  scratch.reserve(pos.size());
  for (index_t p : pos.items()) scratch.push_back(S[p]);
  return IndexView::list(scratch);
}

// Draws a random subset of [0, m), each position included independently with
// probability 2^-k, and asks the oracle about it. Empty draws are vacuously
// empty without spending a query.
bool query_at_rate(const EmptinessFn& is_empty, std::uint64_t m, int k,
                   Rng& rng, std::vector<index_t>& buf) {
  buf.clear();
  if (k <= 3) {
    for (std::uint64_t j = 0; j < m; ++j) {
      bool in = true;
      for (int b = 0; b < k && in; ++b)
        if (rng.bit()) in = false;
      if (in) buf.push_back(static_cast<index_t>(j));
    }
  } else {
    const double p = std::ldexp(1.0, -k);
    const double log1mp = std::log1p(-p);
    std::uint64_t j = 0;
    while (true) {
      const double u = 1.0 - rng.uniform01();  // (0, 1]
      const double skip = std::floor(std::log(u) / log1mp);
      if (skip >= static_cast<double>(m - j)) break;
      j += static_cast<std::uint64_t>(skip);
      if (j >= m) break;
      buf.push_back(static_cast<index_t>(j));
      ++j;
      if (j >= m) break;
    }
  }
  if (buf.empty()) return true;
  return is_empty(IndexView::list(buf));
}

// Predicted node count of exact split-descent recovery of about `hits`
// elements out of m.
double descent_cost(double hits, std::uint64_t m) {
  const double full = 2.0 * static_cast<double>(m) - 1.0;
  const double h = std::max(1.0, hits);
  const double levels =
      std::max(1.0, std::log2(static_cast<double>(m) / h)) + 2.0;
  return std::min(full, 2.0 * h * levels + 1.0);
}

}  // namespace

int auto_jl_reps(double delta) {
  delta = clampd(delta, 1e-300, 0.5);
  return static_cast<int>(std::ceil(std::log2(1.0 / delta))) + 2;
}

std::int64_t auto_emptiness_trials(std::uint64_t m, double alpha,
                                   double delta) {
  if (!(alpha > 0 && alpha < 1) || !(delta > 0 && delta < 1))
    throw std::invalid_argument("alpha and delta must lie in (0,1)");
  const double v =
      12.0 * std::log(2.0 * static_cast<double>(std::max<std::uint64_t>(m, 1)) /
                      delta) /
      (alpha * alpha);
  const double capped = std::min(v, 9.0e15);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(capped)));
}

bool identity_test(const OraclePair& pair, index_t i, const IndexView& S,
                   double delta, Rng& signs, int reps_override) {
  if (i >= pair.n()) throw std::out_of_range("row index out of range");
  if (S.empty()) return true;  // restriction removes every coordinate
  const int d = reps_override > 0 ? reps_override : auto_jl_reps(delta);
  auto& ws = sign_ws();
  ws.prepare(pair.n(), S);
  for (int rep = 0; rep < d; ++rep) {
    ws.randomize(signs);
    const double a = pair.a->row_ip(i, ws.vec);
    const double b = pair.b->row_ip(i, ws.vec);
    if (!pair.answers_equal(a, b)) return false;
  }
  return true;
}

std::vector<std::uint64_t> split_descent(const EmptinessFn& is_empty,
                                         std::uint64_t m) {
  // Node states: untested; nonempty by its own query; nonempty implied by a
  // nonempty parent whose other child tested empty. Implied internal nodes
  // skip their own test (a wrong implication only wastes the subtree);
  // implied singletons are re-verified so reports stay one-sided.
  enum class State : std::uint8_t { untested, tested_nonempty, implied };
  std::vector<std::uint64_t> found;
  if (m == 0) return found;
  std::vector<std::tuple<std::uint64_t, std::uint64_t, State>> stack;
  stack.emplace_back(0, m, State::untested);
  while (!stack.empty()) {
    const auto [lo, hi, state] = stack.back();
    stack.pop_back();
    if (hi - lo == 1) {
      if (state == State::tested_nonempty ||
          !is_empty(IndexView::range(lo, hi)))
        found.push_back(lo);
      continue;
    }
    if (state == State::untested && is_empty(IndexView::range(lo, hi)))
      continue;
    const std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (is_empty(IndexView::range(lo, mid))) {
      stack.emplace_back(mid, hi, State::implied);
    } else {
      stack.emplace_back(mid, hi, State::untested);
      stack.emplace_back(lo, mid, State::tested_nonempty);
    }
  }
  // left subtrees are fully processed before right ones
  return found;
}

double estimate_subset_size(const EmptinessFn& is_empty, std::uint64_t m,
                            const SubsetSizeOptions& opt, Rng& rng) {
  if (m == 0) return 0.0;
  if (is_empty(IndexView::range(0, m))) return 0.0;
  if (m == 1) return 1.0;

  const int levels = ceil_log2(m);
  std::int64_t trials = opt.trials > 0
                            ? opt.trials
                            : auto_emptiness_trials(m, opt.alpha, opt.delta);

  // exact recovery costs at most the full split tree; when even that
  // undercuts the sampling budget, no location pass is needed
  if (opt.allow_exact_path &&
      2.0 * static_cast<double>(m) - 1.0 <= static_cast<double>(trials)) {
    const auto positions = split_descent(is_empty, m);
    return std::max<double>(1.0, static_cast<double>(positions.size()));
  }
  // the location pass only needs a coarse empty fraction: picking an
  // adjacent level barely degrades the inversion, so a small constant budget
  // suffices even when the refine budget is huge
  std::int64_t locate = opt.locate_trials > 0
                            ? opt.locate_trials
                            : std::clamp<std::int64_t>(trials / 8, 32, 128);
  locate = std::min(locate, std::max<std::int64_t>(trials, 32));

  thread_local std::vector<index_t> subset_buf;

  // location pass: smallest rate whose empty fraction clears 1/4
  int kstar = levels;
  double f_located = 1.0;
  for (int k = 1; k <= levels; ++k) {
    std::int64_t empties = 0;
    for (std::int64_t t = 0; t < locate; ++t)
      empties += query_at_rate(is_empty, m, k, rng, subset_buf);
    f_located = static_cast<double>(empties) / static_cast<double>(locate);
    kstar = k;
    if (f_located >= 0.25) break;
  }

  const double p_star = std::ldexp(1.0, -kstar);
  const double fl =
      clampd(f_located, 1.0 / (2.0 * static_cast<double>(locate)),
             1.0 - 1.0 / (2.0 * static_cast<double>(locate)));
  const double rough =
      clampd(std::log(fl) / std::log1p(-p_star), 1.0, static_cast<double>(m));

  if (opt.allow_exact_path &&
      descent_cost(rough, m) <= static_cast<double>(trials)) {
    const auto positions = split_descent(is_empty, m);
    // full-universe query already answered nonempty
    return std::max<double>(1.0, static_cast<double>(positions.size()));
  }

  std::int64_t empties = 0;
  for (std::int64_t t = 0; t < trials; ++t)
    empties += query_at_rate(is_empty, m, kstar, rng, subset_buf);
  const double f =
      clampd(static_cast<double>(empties) / static_cast<double>(trials),
             1.0 / (2.0 * static_cast<double>(trials)),
             1.0 - 1.0 / (2.0 * static_cast<double>(trials)));
  double est = std::log(f) / std::log1p(-p_star);
  est = clampd(est, 1.0, static_cast<double>(m));
  if (opt.integer_round && opt.alpha * est < 0.5) est = std::nearbyint(est);
  return est;
}

double estimate_row_distance(const OraclePair& pair, index_t i,
                             const IndexView& S, const RowDistParams& p,
                             RngBundle& rngs) {
  const std::uint64_t m = S.size();
  if (m == 0) return 0.0;
  const std::int64_t trials =
      p.emptiness_trials > 0 ? p.emptiness_trials
                             : auto_emptiness_trials(m, p.alpha, p.delta);
  // per-query failure budget: at most ~4 log2(m) * min(trials, 2m) emptiness
  // queries are made per call (the exact branch never exceeds the sampling
  // budget it replaces)
  const std::uint64_t q_max =
      4ull * static_cast<std::uint64_t>(std::max(1, ceil_log2(m))) *
      static_cast<std::uint64_t>(
          std::min<std::int64_t>(trials, static_cast<std::int64_t>(2 * m)));
  const double delta_q = p.delta / (2.0 * static_cast<double>(q_max));

  thread_local std::vector<index_t> colbuf;
  const EmptinessFn is_empty = [&](const IndexView& positions) {
    const IndexView cols = positions_to_columns(S, positions, colbuf);
    return identity_test(pair, i, cols, delta_q, rngs.signs, p.jl_reps);
  };

  SubsetSizeOptions opt;
  opt.alpha = p.alpha;
  opt.delta = p.delta;
  opt.trials = trials;
  opt.locate_trials = p.locate_trials;
  opt.integer_round = p.integer_round;
  opt.allow_exact_path = p.allow_exact_path;
  return estimate_subset_size(is_empty, m, opt, rngs.emptiness);
}

double estimate_row_distance(const OraclePair& pair, index_t i,
                             const RowDistParams& p, RngBundle& rngs) {
  return estimate_row_distance(pair, i, IndexView::range(0, pair.n()), p,
                               rngs);
}

std::vector<index_t> exact_mismatches(const OraclePair& pair, index_t i,
                                      const IndexView& S, double delta,
                                      Rng& signs) {
  const std::uint64_t m = S.size();
  std::vector<index_t> out;
  if (m == 0) return out;
  // at most ~4m node queries over the descent
  const double delta_node = delta / (2.0 * static_cast<double>(4 * m));
  thread_local std::vector<index_t> colbuf;
  const EmptinessFn is_empty = [&](const IndexView& positions) {
    const IndexView cols = positions_to_columns(S, positions, colbuf);
    return identity_test(pair, i, cols, delta_node, signs);
  };
  const auto positions = split_descent(is_empty, m);
  out.reserve(positions.size());
  for (const auto p : positions) out.push_back(S[p]);
  return out;
}

}  // namespace mdist::rowdist
