#include "mdist/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "mdist/kernels.hpp"

namespace mdist {

QueryVec restrict(const QueryVec& v, const IndexView& S) {
  QueryVec out = QueryVec::zeros(v.n, v.kind);
  out.restricted = true;
  out.support.reserve(S.size());
  for (std::uint64_t p = 0; p < S.size(); ++p) {
    const index_t j = S[p];
    if (j >= v.n) throw std::out_of_range("restriction index out of range");
    out.support.push_back(j);
    out.coeff[j] = v.coeff[j];
  }
  return out;
}

std::pair<QueryVec, QueryVec> sign_query_decompose(const QueryVec& v) {
  if (v.kind != VecKind::sign)
    throw std::invalid_argument("sign_query_decompose needs a sign vector");
  QueryVec plus = QueryVec::zeros(v.n, VecKind::binary);
  QueryVec minus = QueryVec::zeros(v.n, VecKind::binary);
  plus.restricted = minus.restricted = v.restricted;
  for (index_t j = 0; j < v.n; ++j) {
    if (v.coeff[j] > 0) plus.coeff[j] = 1;
    if (v.coeff[j] < 0) minus.coeff[j] = 1;
  }
  if (v.restricted) {
    plus.support = v.support;
    minus.support = v.support;
  }
  return {std::move(plus), std::move(minus)};
}

namespace {

void check_query(index_t idx, index_t n, const QueryVec& v) {
  if (idx >= n) throw std::out_of_range("oracle index out of range");
  if (v.n != n) throw std::invalid_argument("query vector dimension mismatch");
}

}  // namespace

double MatrixOracle::eval(const double* rowr, const std::int64_t* rowi,
                          const QueryVec& v, index_t lo, index_t hi) const {
  const bool integer = rowi != nullptr;
  if (!v.restricted) {
    if (integer)
      return static_cast<double>(
          kernels::dot_i64(rowi + lo, v.coeff.data() + lo, hi - lo));
    return kernels::dot_f64(rowr + lo, v.coeff.data() + lo, hi - lo);
  }
  // clip the sorted support to [lo, hi)
  auto first = std::lower_bound(v.support.begin(), v.support.end(), lo);
  auto last = std::lower_bound(first, v.support.end(), hi);
  const std::size_t len = static_cast<std::size_t>(last - first);
  if (len == 0) return 0.0;
  const bool contiguous =
      static_cast<std::uint64_t>(*(last - 1)) - *first + 1 == len;
  if (contiguous) {
    const index_t a = *first, b = *(last - 1) + 1;
    if (integer)
      return static_cast<double>(
          kernels::dot_i64(rowi + a, v.coeff.data() + a, b - a));
    return kernels::dot_f64(rowr + a, v.coeff.data() + a, b - a);
  }
  if (integer) {
    std::int64_t acc = 0;
    for (auto it = first; it != last; ++it)
      acc += rowi[*it] * static_cast<std::int64_t>(v.coeff[*it]);
    return static_cast<double>(acc);
  }
  double acc = 0.0;
  for (auto it = first; it != last; ++it)
    acc += rowr[*it] * static_cast<double>(v.coeff[*it]);
  return acc;
}

double MatrixOracle::row_ip(index_t i, const QueryVec& v) {
  return row_ip_clipped(i, v, 0, n());
}

double MatrixOracle::row_ip_clipped(index_t i, const QueryVec& v, index_t lo,
                                    index_t hi) {
  check_query(i, n(), v);
  if (v.kind == VecKind::sign)
    ++c_.row_sign;
  else
    ++c_.row_binary;
  const bool integer = m_->mode() == EntryMode::integer;
  const double* rowr = integer ? nullptr : m_->row_f64(i).data();
  const std::int64_t* rowi = integer ? m_->row_i64(i).data() : nullptr;
  return eval(rowr, rowi, v, lo, hi);
}

void MatrixOracle::ensure_transpose() {
  if (transposed_) return;
  const index_t n = m_->n();
  if (m_->mode() == EntryMode::integer) {
    ti_.resize(static_cast<std::size_t>(n) * n);
    for (index_t i = 0; i < n; ++i)
      for (index_t j = 0; j < n; ++j)
        ti_[static_cast<std::size_t>(j) * n + i] = m_->geti(i, j);
  } else {
    tr_.resize(static_cast<std::size_t>(n) * n);
    for (index_t i = 0; i < n; ++i)
      for (index_t j = 0; j < n; ++j)
        tr_[static_cast<std::size_t>(j) * n + i] = m_->getr(i, j);
  }
  transposed_ = true;
}

double MatrixOracle::col_ip(index_t j, const QueryVec& v) {
  return col_ip_clipped(j, v, 0, n());
}

double MatrixOracle::col_ip_clipped(index_t j, const QueryVec& v, index_t lo,
                                    index_t hi) {
  check_query(j, n(), v);
  if (v.kind == VecKind::sign)
    ++c_.col_sign;
  else
    ++c_.col_binary;
  ensure_transpose();
  const index_t n = m_->n();
  const bool integer = m_->mode() == EntryMode::integer;
  const double* colr =
      integer ? nullptr : tr_.data() + static_cast<std::size_t>(j) * n;
  const std::int64_t* coli =
      integer ? ti_.data() + static_cast<std::size_t>(j) * n : nullptr;
  return eval(colr, coli, v, lo, hi);
}

double SymmetrizedOracle::row_ip(index_t i, const QueryVec& v) {
  check_query(i, n(), v);
  if (v.kind == VecKind::sign)
    ++c_.row_sign;
  else
    ++c_.row_binary;
  // Exactly two base queries, even when one side of the split is empty.
  const index_t nn = n();
  double sum;
  if (mode_ == MirrorMode::lower) {
    sum = base_->row_ip_clipped(i, v, 0, i + 1);
    sum += base_->col_ip_clipped(i, v, i + 1, nn);
  } else {
    sum = base_->row_ip_clipped(i, v, i, nn);
    sum += base_->col_ip_clipped(i, v, 0, i);
  }
  return sum;
}

Matrix SymmetrizedOracle::materialize() const {
  const Matrix& src = base_->matrix();
  const index_t n = src.n();
  Matrix out(n, src.mode());
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < n; ++j) {
      const bool take_ij =
          mode_ == MirrorMode::lower ? (i >= j) : (i <= j);
      const index_t si = take_ij ? i : j;
      const index_t sj = take_ij ? j : i;
      if (src.mode() == EntryMode::integer)
        out.seti(i, j, src.geti(si, sj));
      else
        out.setr(i, j, src.getr(si, sj));
    }
  return out;
}

}  // namespace mdist
