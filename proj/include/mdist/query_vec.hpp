#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mdist/index_view.hpp"

namespace mdist {

enum class VecKind : std::uint8_t { binary, sign };

/// Query vector handed to an oracle. Dense coefficients over [0, n) with
/// values in {0,1} (binary) or {-1,+1} (sign); a restriction zeroes
/// everything outside `support` (which widens the sign alphabet to
/// {-1,0,+1}). `restricted == false` means full support.
struct QueryVec {
  index_t n = 0;
  VecKind kind = VecKind::binary;
  std::vector<std::int8_t> coeff;    // size n
  bool restricted = false;
  std::vector<index_t> support;      // sorted; meaningful iff restricted

  static QueryVec zeros(index_t n, VecKind kind) {
    QueryVec v;
    v.n = n;
    v.kind = kind;
    v.coeff.assign(n, 0);
    return v;
  }

  /// True when the support is one contiguous run (lets the oracle evaluate a
  /// single dense slice).
  bool support_contiguous() const {
    if (!restricted) return true;
    if (support.empty()) return true;
    return static_cast<std::uint64_t>(support.back()) - support.front() + 1 ==
           support.size();
  }
};

/// Zeroes every coordinate outside S and records S as the support.
QueryVec restrict(const QueryVec& v, const IndexView& S);

/// Splits a sign vector into indicator vectors of its +1 and -1 coordinates,
/// so that v = plus - minus coordinatewise.
std::pair<QueryVec, QueryVec> sign_query_decompose(const QueryVec& v);

}  // namespace mdist
