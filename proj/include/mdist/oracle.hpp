#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "mdist/matrix.hpp"
#include "mdist/query_vec.hpp"

namespace mdist {

/// Per-kind oracle call counts. A sign query is charged as two effective
/// binary queries (it decomposes into the +1 and -1 indicator queries).
struct QueryCounters {
  std::uint64_t row_binary = 0;
  std::uint64_t col_binary = 0;
  std::uint64_t row_sign = 0;
  std::uint64_t col_sign = 0;

  std::uint64_t effective_binary() const {
    return row_binary + col_binary + 2 * (row_sign + col_sign);
  }
  std::uint64_t total_calls() const {
    return row_binary + col_binary + row_sign + col_sign;
  }
};

/// Query gateway to one (possibly virtual) matrix. Single-owner: every query
/// mutates the counters, so handles may be moved between threads but not
/// shared concurrently. Parallel trials need independent handles.
class RowOracle {
 public:
  virtual ~RowOracle() = default;

  virtual index_t n() const = 0;
  /// Exact inner product of row i with v. Errors on index/dimension
  /// mismatch; increments counters.
  virtual double row_ip(index_t i, const QueryVec& v) = 0;
  virtual double col_ip(index_t j, const QueryVec& v) = 0;
  virtual bool is_symmetric() const = 0;

  /// This oracle's own call counts.
  virtual const QueryCounters& counters() const = 0;
  /// Effective binary total charged to the backing matrix handle(s),
  /// including any simulation surcharge.
  virtual std::uint64_t base_effective_binary() const = 0;
};

/// Direct handle on a hosted Matrix. Answers are computed by direct
/// summation over the hidden entries; counters count oracle calls, not
/// arithmetic.
class MatrixOracle final : public RowOracle {
 public:
  explicit MatrixOracle(const Matrix& m) : m_(&m) {}

  index_t n() const override { return m_->n(); }
  double row_ip(index_t i, const QueryVec& v) override;
  double col_ip(index_t j, const QueryVec& v) override;
  bool is_symmetric() const override { return m_->is_symmetric(); }
  const QueryCounters& counters() const override { return c_; }
  std::uint64_t base_effective_binary() const override {
    return c_.effective_binary();
  }

  /// Row query with v further restricted to columns [lo, hi); one charged
  /// query of v's kind. Used to simulate queries against mirrored views.
  double row_ip_clipped(index_t i, const QueryVec& v, index_t lo, index_t hi);
  double col_ip_clipped(index_t j, const QueryVec& v, index_t lo, index_t hi);

  const Matrix& matrix() const { return *m_; }

 private:
  double eval(const double* rowr, const std::int64_t* rowi, const QueryVec& v,
              index_t lo, index_t hi) const;
  void ensure_transpose();

  const Matrix* m_;
  QueryCounters c_;
  // transposed copy, built on first column query (columns are hot in the
  // mirrored views)
  std::vector<std::int64_t> ti_;
  std::vector<double> tr_;
  bool transposed_ = false;
};

enum class MirrorMode : std::uint8_t { lower, upper };

/// Virtual symmetric matrix formed by mirroring one triangle of the base
/// matrix across the diagonal (lower keeps entries with i >= j, upper keeps
/// i <= j). Each query is answered by two base queries: for mode lower,
/// <row_i, r restricted to cols <= i> on the row side plus
/// <col_i, r restricted to cols > i> on the column side (mirrored split for
/// mode upper); exactly two base queries are charged per view query.
class SymmetrizedOracle final : public RowOracle {
 public:
  SymmetrizedOracle(MatrixOracle& base, MirrorMode mode)
      : base_(&base), mode_(mode) {}

  index_t n() const override { return base_->n(); }
  double row_ip(index_t i, const QueryVec& v) override;
  // the view is symmetric, so column queries delegate to row queries
  double col_ip(index_t j, const QueryVec& v) override { return row_ip(j, v); }
  bool is_symmetric() const override { return true; }
  const QueryCounters& counters() const override { return c_; }
  std::uint64_t base_effective_binary() const override {
    return base_->base_effective_binary();
  }

  MirrorMode mode() const { return mode_; }
  MatrixOracle& base() { return *base_; }

  /// Materializes the virtual matrix (test and diagnostics support).
  Matrix materialize() const;

 private:
  MatrixOracle* base_;
  MirrorMode mode_;
  QueryCounters c_;
};

/// <view(i,*), r>, answered with two base queries.
inline double delta_row_ip(SymmetrizedOracle& view, index_t i,
                           const QueryVec& r) {
  return view.row_ip(i, r);
}

/// The pair of oracles every distance primitive works against, plus the
/// answer-comparison tolerance (0 in integer mode: comparisons are exact).
struct OraclePair {
  RowOracle* a = nullptr;
  RowOracle* b = nullptr;
  double eq_tol = 0.0;

  index_t n() const { return a->n(); }
  bool answers_equal(double x, double y) const {
    return std::fabs(x - y) <= eq_tol;
  }
  std::uint64_t effective_binary_total() const {
    return a->base_effective_binary() + b->base_effective_binary();
  }
};

}  // namespace mdist
