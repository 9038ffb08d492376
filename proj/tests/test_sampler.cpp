#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "mdist/refcheck.hpp"
#include "mdist/sampler.hpp"
#include "test_support.hpp"

using namespace mdist;
using testsup::TestPair;

namespace {

TestPair planted_row_pair(index_t n, index_t row,
                          const std::vector<index_t>& cols,
                          std::uint64_t seed) {
  Matrix a = testsup::random_int_matrix(n, seed);
  Matrix b = a;
  for (const index_t c : cols) b.seti(row, c, b.geti(row, c) + 1);
  return TestPair{std::move(a), std::move(b)};
}

std::vector<index_t> spread_columns(index_t n, std::uint64_t count,
                                    std::uint64_t seed) {
  Rng rng(seed);
  std::set<index_t> s;
  while (s.size() < count) s.insert(static_cast<index_t>(rng.below(n)));
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("hierarchy interval lookup") {
  CHECK(sampler::hier_locate(4, 0, 8) == 0);   // the root holds everything
  CHECK(sampler::hier_locate(4, 3, 8) == 4);   // the last level pins the column
  CHECK(sampler::hier_locate(4, 1, 8) == 1);
  CHECK_THROWS_AS(sampler::hier_locate(8, 1, 8), std::out_of_range);
  CHECK_THROWS_AS(sampler::hier_locate(1, 5, 8), std::out_of_range);
  CHECK_THROWS_AS(sampler::hier_locate(1, 0, 6), std::invalid_argument);

  // parent/child identities, exhaustively up to 256
  for (std::uint64_t n : {2ull, 8ull, 64ull, 256ull}) {
    const int logn = std::bit_width(n) - 1;
    for (index_t ell = 0; ell < n; ++ell) {
      CHECK(sampler::hier_locate(ell, logn, n) == ell);
      for (int j = 1; j <= logn; ++j) {
        const index_t child = sampler::hier_locate(ell, j, n);
        CHECK(sampler::hier_locate(ell, j - 1, n) == child / 2);
      }
    }
  }
}

TEST_CASE("sampling a single mismatch returns its column") {
  TestPair tp = planted_row_pair(64, 3, {37}, 60);
  RngBundle rngs(61);
  sampler::SamplerParams sp;
  sp.alpha = 0.1;
  sp.delta = 0.1;
  for (int rep = 0; rep < 50; ++rep)
    CHECK(sampler::approx_sample(tp.pair, 3, sp, rngs) == 37);
}

TEST_CASE("every draw lands in the true mismatch set") {
  const auto cols = spread_columns(64, 16, 62);
  TestPair tp = planted_row_pair(64, 5, cols, 63);
  const std::set<index_t> truth(cols.begin(), cols.end());
  RngBundle rngs(64);
  sampler::SamplerParams sp;
  sp.alpha = 0.1;
  sp.delta = 0.1;
  for (int rep = 0; rep < 2000; ++rep)
    CHECK(truth.count(sampler::approx_sample(tp.pair, 5, sp, rngs)) == 1);
}

TEST_CASE("identical rows raise the empty-row error") {
  const Matrix a = testsup::random_int_matrix(32, 65);
  TestPair tp{a, a};
  RngBundle rngs(66);
  sampler::SamplerParams sp;
  CHECK_THROWS_AS(sampler::approx_sample(tp.pair, 4, sp, rngs),
                  sampler::EmptyRow);
}

TEST_CASE("descent with exact child distances is exactly uniform") {
  const auto cols = spread_columns(64, 16, 67);
  TestPair tp = planted_row_pair(64, 9, cols, 68);
  RngBundle rngs(69);
  sampler::SamplerParams sp;
  sp.alpha = 0.1;
  sp.delta = 0.1;
  sp.distance_fn = [&](index_t i, const IndexView& S) {
    return static_cast<double>(refcheck::exact_row_distance(tp.a, tp.b, i, S));
  };

  const int draws = 20000;
  std::map<index_t, int> hist;
  for (int d = 0; d < draws; ++d)
    ++hist[sampler::approx_sample(tp.pair, 9, sp, rngs)];

  CHECK(hist.size() == 16);
  const double expected = draws / 16.0;
  double chi2 = 0;
  for (const auto& [col, cnt] : hist) {
    CHECK(std::find(cols.begin(), cols.end(), col) != cols.end());
    chi2 += (cnt - expected) * (cnt - expected) / expected;
  }
  // chi-square 15 dof, upper 1% point
  CHECK(chi2 <= 30.5779);
  // the injected oracle keeps the real oracles untouched
  CHECK(tp.pair.effective_binary_total() == 0);
}

TEST_CASE("each descent takes two child estimates per level") {
  const auto cols = spread_columns(64, 7, 70);
  TestPair tp = planted_row_pair(64, 0, cols, 71);
  RngBundle rngs(72);
  int calls = 0;
  sampler::SamplerParams sp;
  sp.distance_fn = [&](index_t i, const IndexView& S) {
    ++calls;
    return static_cast<double>(refcheck::exact_row_distance(tp.a, tp.b, i, S));
  };
  for (int d = 1; d <= 20; ++d) {
    sampler::approx_sample(tp.pair, 0, sp, rngs);
    CHECK(calls == d * 2 * 6);  // 2 log2(64) calls per draw
  }
}

TEST_CASE("adjacent two-point support splits evenly") {
  TestPair tp = planted_row_pair(64, 2, {0, 1}, 73);
  RngBundle rngs(74);
  sampler::SamplerParams sp;
  sp.alpha = 0.1;
  sp.delta = 0.1;
  const int draws = 4000;
  int zeros = 0;
  for (int d = 0; d < draws; ++d) {
    const index_t c = sampler::approx_sample(tp.pair, 2, sp, rngs);
    REQUIRE((c == 0 || c == 1));
    zeros += (c == 0);
  }
  const double f = static_cast<double>(zeros) / draws;
  // 0.5 +- (alpha + 4 sigma)
  const double slack = 0.1 * 0.5 + 4 * std::sqrt(0.25 / draws);
  CHECK(f >= 0.5 - slack);
  CHECK(f <= 0.5 + slack);
}

TEST_CASE("non-power-of-two widths never sample the padded tail") {
  // n = 48 pads to 64; columns past 47 do not exist
  const auto cols = spread_columns(48, 9, 75);
  TestPair tp = planted_row_pair(48, 11, cols, 76);
  const std::set<index_t> truth(cols.begin(), cols.end());
  RngBundle rngs(77);
  sampler::SamplerParams sp;
  for (int rep = 0; rep < 500; ++rep) {
    const index_t c = sampler::approx_sample(tp.pair, 11, sp, rngs);
    CHECK(c < 48);
    CHECK(truth.count(c) == 1);
  }
}
