#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "mdist/oracle.hpp"
#include "mdist/refcheck.hpp"
#include "test_support.hpp"

using namespace mdist;
using testsup::TestPair;

TEST_CASE("row queries answer exact inner products") {
  SUBCASE("all-zero matrix") {
    Matrix z(4);
    MatrixOracle o(z);
    Rng rng(1);
    CHECK(o.row_ip(2, testsup::random_sign_vec(4, rng)) == 0.0);
    CHECK(o.row_ip(0, testsup::random_binary_vec(4, rng)) == 0.0);
  }
  SUBCASE("identity matrix row sums") {
    Matrix id(4);
    for (index_t i = 0; i < 4; ++i) id.seti(i, i, 1);
    MatrixOracle o(id);
    auto ones = QueryVec::zeros(4, VecKind::binary);
    for (auto& c : ones.coeff) c = 1;
    CHECK(o.row_ip(1, ones) == 1.0);
    auto e2 = QueryVec::zeros(4, VecKind::binary);
    e2.coeff[2] = 1;
    CHECK(o.col_ip(2, e2) == 1.0);
  }
  SUBCASE("random matrix vs direct dot") {
    const Matrix m = testsup::random_int_matrix(8, 7);
    MatrixOracle o(m);
    Rng rng(2);
    for (int rep = 0; rep < 50; ++rep) {
      const auto i = static_cast<index_t>(rng.below(8));
      const QueryVec v = testsup::random_sign_vec(8, rng);
      CHECK(o.row_ip(i, v) == testsup::direct_row_dot(m, i, v));
      CHECK(o.col_ip(i, v) == testsup::direct_col_dot(m, i, v));
    }
  }
  SUBCASE("symmetric matrix: column queries equal row queries") {
    const Matrix m = testsup::random_int_matrix(8, 8, 10, true);
    MatrixOracle o(m);
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
      const auto j = static_cast<index_t>(rng.below(8));
      const QueryVec v = testsup::random_binary_vec(8, rng);
      CHECK(o.col_ip(j, v) == o.row_ip(j, v));
    }
  }
  SUBCASE("errors") {
    Matrix m(4);
    MatrixOracle o(m);
    Rng rng(4);
    CHECK_THROWS_AS(o.row_ip(4, testsup::random_sign_vec(4, rng)),
                    std::out_of_range);
    CHECK_THROWS_AS(o.row_ip(0, testsup::random_sign_vec(5, rng)),
                    std::invalid_argument);
  }
}

TEST_CASE("sign decomposition splits coordinatewise") {
  auto v = QueryVec::zeros(4, VecKind::sign);
  v.coeff = {1, -1, 1, -1};
  auto [plus, minus] = sign_query_decompose(v);
  CHECK(plus.coeff == std::vector<std::int8_t>{1, 0, 1, 0});
  CHECK(minus.coeff == std::vector<std::int8_t>{0, 1, 0, 1});

  auto all_plus = QueryVec::zeros(2, VecKind::sign);
  all_plus.coeff = {1, 1};
  auto [p2, m2] = sign_query_decompose(all_plus);
  CHECK(p2.coeff == std::vector<std::int8_t>{1, 1});
  CHECK(m2.coeff == std::vector<std::int8_t>{0, 0});
}

TEST_CASE("sign query parity: one sign query equals two binary queries") {
  const Matrix m = testsup::random_int_matrix(16, 11);
  MatrixOracle o(m);
  Rng rng(5);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto i = static_cast<index_t>(rng.below(16));
    const QueryVec v = testsup::random_sign_vec(16, rng);
    auto [plus, minus] = sign_query_decompose(v);
    CHECK(o.row_ip(i, v) == o.row_ip(i, plus) - o.row_ip(i, minus));
  }
  // 1000 sign + 2000 binary row queries
  CHECK(o.counters().row_sign == 1000);
  CHECK(o.counters().row_binary == 2000);
  CHECK(o.counters().effective_binary() == 2000 + 2 * 1000);
}

TEST_CASE("restriction zeroes coordinates outside the support") {
  auto v = QueryVec::zeros(4, VecKind::sign);
  v.coeff = {1, -1, 1, -1};

  const QueryVec full = restrict(v, IndexView::range(0, 4));
  CHECK(full.coeff == v.coeff);

  const QueryVec none = restrict(v, IndexView::range(0, 0));
  CHECK(none.coeff == std::vector<std::int8_t>{0, 0, 0, 0});

  const std::vector<index_t> s{0, 3};
  const QueryVec part = restrict(v, IndexView::list(s));
  CHECK(part.coeff == std::vector<std::int8_t>{1, 0, 0, -1});
}

TEST_CASE("restricted-row products equal restricted-vector queries") {
  // <A(i,*)|_S, r> = <A(i,*), r|_S> over random (A, i, S, r)
  Rng rng(6);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto n = static_cast<index_t>(4 + rng.below(29));
    const Matrix m = testsup::random_int_matrix(n, 1000 + rep);
    MatrixOracle o(m);
    const auto i = static_cast<index_t>(rng.below(n));
    QueryVec r = testsup::random_sign_vec(n, rng);
    std::vector<index_t> s;
    for (index_t j = 0; j < n; ++j)
      if (rng.bit()) s.push_back(j);
    const QueryVec rs = restrict(r, IndexView::list(s));
    double lhs = 0;  // row restricted, full vector
    for (const index_t j : s)
      lhs += m.value(i, j) * static_cast<double>(r.coeff[j]);
    CHECK(o.row_ip(i, rs) == lhs);
  }
}

TEST_CASE("mirrored views answer like their materialized matrices") {
  SUBCASE("2x2 worked example") {
    Matrix a(2);
    a.seti(0, 1, 5);
    a.seti(1, 0, 7);
    MatrixOracle base(a);
    SymmetrizedOracle lower(base, MirrorMode::lower);
    SymmetrizedOracle upper(base, MirrorMode::upper);
    auto ones = QueryVec::zeros(2, VecKind::binary);
    ones.coeff = {1, 1};
    CHECK(lower.row_ip(0, ones) == 7.0);  // mirrored row is (0, 7)
    CHECK(upper.row_ip(0, ones) == 5.0);  // mirrored row is (0, 5)
    const Matrix ml = lower.materialize();
    CHECK(ml.geti(0, 1) == 7);
    CHECK(ml.geti(1, 0) == 7);
    CHECK(ml.is_symmetric());
  }
  SUBCASE("already-symmetric matrices are unchanged") {
    const Matrix m = testsup::random_int_matrix(8, 21, 10, true);
    MatrixOracle base(m);
    SymmetrizedOracle lower(base, MirrorMode::lower);
    Rng rng(7);
    for (int rep = 0; rep < 30; ++rep) {
      const auto i = static_cast<index_t>(rng.below(8));
      const QueryVec v = testsup::random_sign_vec(8, rng);
      MatrixOracle fresh(m);
      CHECK(lower.row_ip(i, v) == fresh.row_ip(i, v));
    }
  }
  SUBCASE("random views vs materialization") {
    Rng rng(8);
    for (int rep = 0; rep < 40; ++rep) {
      const auto n = static_cast<index_t>(2 + rng.below(31));
      const Matrix m = testsup::random_int_matrix(n, 500 + rep);
      MatrixOracle base(m);
      for (const auto mode : {MirrorMode::lower, MirrorMode::upper}) {
        SymmetrizedOracle view(base, mode);
        const Matrix mat = view.materialize();
        MatrixOracle ref(mat);
        for (int q = 0; q < 25; ++q) {
          const auto i = static_cast<index_t>(rng.below(n));
          const QueryVec v = rng.bit() ? testsup::random_sign_vec(n, rng)
                                       : testsup::random_binary_vec(n, rng);
          CHECK(view.row_ip(i, v) == ref.row_ip(i, v));
        }
      }
    }
  }
}

TEST_CASE("mirrored split identity of the matrix distance") {
  Rng rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    const auto n = static_cast<index_t>(2 + rng.below(31));
    const Matrix a = testsup::random_int_matrix(n, 2000 + rep, 3);
    const Matrix b = testsup::random_int_matrix(n, 9000 + rep, 3);
    MatrixOracle oa(a), ob(b);
    const Matrix la = SymmetrizedOracle(oa, MirrorMode::lower).materialize();
    const Matrix lb = SymmetrizedOracle(ob, MirrorMode::lower).materialize();
    const Matrix ua = SymmetrizedOracle(oa, MirrorMode::upper).materialize();
    const Matrix ub = SymmetrizedOracle(ob, MirrorMode::upper).materialize();
    const std::uint64_t d = refcheck::exact_matrix_distance(a, b);
    const std::uint64_t dl = refcheck::exact_matrix_distance(la, lb);
    const std::uint64_t du = refcheck::exact_matrix_distance(ua, ub);
    CHECK(2 * d == dl + du);
    // the two mirrored views overlap exactly on the diagonal
    for (index_t i = 0; i < n; ++i)
      CHECK(la.geti(i, i) + ua.geti(i, i) == 2 * a.geti(i, i));
  }
}

TEST_CASE("view queries charge exactly two base queries") {
  const Matrix m = testsup::random_int_matrix(8, 31);
  MatrixOracle base(m);
  SymmetrizedOracle view(base, MirrorMode::lower);
  Rng rng(10);
  const QueryVec sv = testsup::random_sign_vec(8, rng);
  const QueryVec bv = testsup::random_binary_vec(8, rng);

  view.row_ip(3, sv);
  CHECK(base.counters().row_sign == 1);
  CHECK(base.counters().col_sign == 1);
  CHECK(base.counters().effective_binary() == 4);

  view.row_ip(7, bv);  // column side has empty support but is still charged
  CHECK(base.counters().row_binary == 1);
  CHECK(base.counters().col_binary == 1);
  CHECK(base.counters().effective_binary() == 6);

  CHECK(view.counters().row_sign == 1);
  CHECK(view.counters().row_binary == 1);
  CHECK(view.base_effective_binary() == base.counters().effective_binary());
}

TEST_CASE("matrix file format round-trips") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mdist_oracle_test";
  fs::create_directories(dir);

  SUBCASE("integer mode") {
    const Matrix m = testsup::random_int_matrix(9, 77);
    const std::string p = (dir / "int.mat").string();
    m.save(p);
    const Matrix back = Matrix::load(p);
    CHECK(back.mode() == EntryMode::integer);
    CHECK(refcheck::exact_matrix_distance(m, back) == 0);
  }
  SUBCASE("real mode with tolerance") {
    Matrix m(3, EntryMode::real);
    m.setr(0, 0, 1.5);
    m.setr(2, 1, -0.125);
    const std::string p = (dir / "real.mat").string();
    m.save(p);
    const Matrix back = Matrix::load(p);
    CHECK(back.mode() == EntryMode::real);
    CHECK(back.getr(0, 0) == 1.5);
    CHECK(back.getr(2, 1) == -0.125);
  }
  fs::remove_all(dir);
}

TEST_CASE("real-mode pairs compare with an absolute tolerance") {
  Matrix a(2, EntryMode::real), b(2, EntryMode::real);
  a.setr(0, 0, 1.0);
  b.setr(0, 0, 1.0 + 1e-12);
  TestPair tp{std::move(a), std::move(b)};
  tp.pair.eq_tol = 1e-9;
  Rng rng(11);
  const QueryVec e0 = [&] {
    auto v = QueryVec::zeros(2, VecKind::binary);
    v.coeff[0] = 1;
    return v;
  }();
  const double x = tp.pair.a->row_ip(0, e0);
  const double y = tp.pair.b->row_ip(0, e0);
  CHECK(tp.pair.answers_equal(x, y));
  CHECK(refcheck::exact_matrix_distance(tp.a, tp.b, 1e-9) == 0);
  CHECK(refcheck::exact_matrix_distance(tp.a, tp.b, 1e-15) == 1);
}
