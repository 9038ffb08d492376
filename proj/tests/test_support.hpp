#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mdist/matrix.hpp"
#include "mdist/oracle.hpp"
#include "mdist/rng.hpp"

namespace testsup {

inline mdist::Matrix random_int_matrix(mdist::index_t n, std::uint64_t seed,
                                       int span = 10,
                                       bool symmetric = false) {
  mdist::Rng rng(seed, 99);
  mdist::Matrix m(n, mdist::EntryMode::integer);
  for (mdist::index_t i = 0; i < n; ++i)
    for (mdist::index_t j = symmetric ? i : 0; j < n; ++j) {
      const auto v = static_cast<std::int64_t>(rng.below(span));
      m.seti(i, j, v);
      if (symmetric && i != j) m.seti(j, i, v);
    }
  return m;
}

inline mdist::QueryVec random_sign_vec(mdist::index_t n, mdist::Rng& rng) {
  auto v = mdist::QueryVec::zeros(n, mdist::VecKind::sign);
  for (mdist::index_t j = 0; j < n; ++j) v.coeff[j] = rng.bit() ? 1 : -1;
  return v;
}

inline mdist::QueryVec random_binary_vec(mdist::index_t n, mdist::Rng& rng) {
  auto v = mdist::QueryVec::zeros(n, mdist::VecKind::binary);
  for (mdist::index_t j = 0; j < n; ++j) v.coeff[j] = rng.bit() ? 1 : 0;
  return v;
}

// naive reference evaluation, independent of the oracle path
inline double direct_row_dot(const mdist::Matrix& m, mdist::index_t i,
                             const mdist::QueryVec& v) {
  double acc = 0;
  for (mdist::index_t j = 0; j < m.n(); ++j)
    acc += m.value(i, j) * static_cast<double>(v.coeff[j]);
  return acc;
}

inline double direct_col_dot(const mdist::Matrix& m, mdist::index_t j,
                             const mdist::QueryVec& v) {
  double acc = 0;
  for (mdist::index_t i = 0; i < m.n(); ++i)
    acc += m.value(i, j) * static_cast<double>(v.coeff[i]);
  return acc;
}

// Squared-projection distance estimate: ||f(a_i) - f(b_i)||^2 over `reps`
// random sign vectors approximates the Hamming distance of rows that only
// take values in {0,1}. Test support only; the production estimators never
// use it (it breaks for general alphabets).
inline double l2_projection_row_distance(const mdist::OraclePair& pair,
                                         mdist::index_t i, int reps,
                                         mdist::Rng& rng) {
  double sum = 0;
  for (int r = 0; r < reps; ++r) {
    const mdist::QueryVec v = random_sign_vec(pair.n(), rng);
    const double diff = pair.a->row_ip(i, v) - pair.b->row_ip(i, v);
    sum += diff * diff;
  }
  return sum / reps;
}

// owns two matrices plus their oracle pair
struct TestPair {
  mdist::Matrix a, b;
  mdist::MatrixOracle oa, ob;
  mdist::OraclePair pair;

  TestPair(mdist::Matrix a_in, mdist::Matrix b_in)
      : a(std::move(a_in)),
        b(std::move(b_in)),
        oa(a),
        ob(b),
        pair{&oa, &ob, 0.0} {}
};

}  // namespace testsup
