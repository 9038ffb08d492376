#include "doctest.h"
#include "mdist/estimator.hpp"
#include "mdist/instances.hpp"
#include "test_support.hpp"

using namespace mdist;
using testsup::TestPair;

TEST_CASE("reported query totals equal the handles' charged totals") {
  instances::InstanceSpec spec;
  spec.kind = instances::Kind::planted_symmetric;
  spec.n = 64;
  spec.d_or_t = 600;
  spec.seed = 120;
  auto gen = instances::generate(spec);
  TestPair tp{std::move(gen.a), std::move(gen.b)};
  RngBundle rngs(121);
  const auto p = estimator::EstimatorParams::relaxed(64, 0.4);
  const auto rep = estimator::symm_estimate(tp.pair, p, rngs);
  CHECK(rep.queries.total ==
        tp.oa.counters().effective_binary() + tp.ob.counters().effective_binary());
  CHECK(rep.queries.total == rep.queries.row_phase + rep.queries.sampler_phase);
  // every call here is a sign query: two effective binary queries each
  CHECK(rep.queries.total ==
        2 * (tp.oa.counters().total_calls() + tp.ob.counters().total_calls()));
}

TEST_CASE("mirrored views charge their base twice per call") {
  instances::InstanceSpec spec;
  spec.kind = instances::Kind::planted_random;
  spec.n = 32;
  spec.d_or_t = 200;
  spec.seed = 122;
  auto gen = instances::generate(spec);
  MatrixOracle oa(gen.a), ob(gen.b);
  RngBundle rngs(123);
  const auto p = estimator::EstimatorParams::relaxed(32, 0.4);
  estimator::arbitrary_estimate(oa, ob, p, rngs);

  SymmetrizedOracle probe_low(oa, MirrorMode::lower);
  (void)probe_low;
  // all traffic flowed through the four views; each view query becomes one
  // row and one column query of the same kind on its base handle
  const auto& ca = oa.counters();
  CHECK(ca.row_sign == ca.col_sign);
  CHECK(ca.row_binary == ca.col_binary);
  const auto& cb = ob.counters();
  CHECK(cb.row_sign == cb.col_sign);
  CHECK(cb.row_binary == cb.col_binary);
  CHECK(ca.effective_binary() > 0);
}
