#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace mdist {

using index_t = std::uint32_t;

/// Non-owning view of a sorted set of indices. Two representations: a
/// contiguous range [lo, hi), or an explicit sorted list. Contiguous ranges
/// keep the hierarchy machinery allocation-free; explicit lists cover
/// arbitrary subsets. Positions (0-based ranks within the view) are the
/// common currency for subsampling and splitting.
class IndexView {
 public:
  IndexView() = default;

  static IndexView range(std::uint64_t lo, std::uint64_t hi) {
    IndexView v;
    if (hi < lo) hi = lo;
    v.lo_ = static_cast<index_t>(lo);
    v.hi_ = static_cast<index_t>(hi);
    return v;
  }

  /// `items` must be sorted ascending and duplicate-free; not copied.
  static IndexView list(std::span<const index_t> items) {
    IndexView v;
    v.items_ = items;
    v.is_list_ = true;
    return v;
  }

  bool is_range() const { return !is_list_; }
  std::uint64_t size() const { return is_list_ ? items_.size() : hi_ - lo_; }
  bool empty() const { return size() == 0; }

  index_t operator[](std::uint64_t pos) const {
    return is_list_ ? items_[pos] : static_cast<index_t>(lo_ + pos);
  }

  index_t lo() const { return lo_; }
  index_t hi() const { return hi_; }
  std::span<const index_t> items() const { return items_; }

  /// Sub-view covering positions [p0, p1).
  IndexView slice(std::uint64_t p0, std::uint64_t p1) const {
    if (is_list_) return list(items_.subspan(p0, p1 - p0));
    return range(lo_ + p0, lo_ + p1);
  }

  bool contains(index_t x) const {
    if (!is_list_) return x >= lo_ && x < hi_;
    return std::binary_search(items_.begin(), items_.end(), x);
  }

  std::vector<index_t> to_vector() const {
    std::vector<index_t> out;
    out.reserve(size());
    for (std::uint64_t p = 0; p < size(); ++p) out.push_back((*this)[p]);
    return out;
  }

 private:
  index_t lo_ = 0, hi_ = 0;
  std::span<const index_t> items_{};
  bool is_list_ = false;
};

}  // namespace mdist
