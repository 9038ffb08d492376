#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdist/index_view.hpp"

namespace mdist {

enum class EntryMode : std::uint8_t { integer, real };

/// Dense n x n grid, the hidden object behind every oracle. Integer entries
/// by default so zero tests are exact; a real mode stores doubles and pairs
/// with an absolute comparison tolerance at the oracle level.
class Matrix {
 public:
  Matrix(index_t n, EntryMode mode = EntryMode::integer);

  index_t n() const { return n_; }
  EntryMode mode() const { return mode_; }

  std::int64_t geti(index_t i, index_t j) const { return vi_[idx(i, j)]; }
  double getr(index_t i, index_t j) const { return vr_[idx(i, j)]; }
  double value(index_t i, index_t j) const {
    return mode_ == EntryMode::integer ? static_cast<double>(geti(i, j))
                                       : getr(i, j);
  }

  void seti(index_t i, index_t j, std::int64_t v);
  void setr(index_t i, index_t j, double v);

  std::span<const std::int64_t> row_i64(index_t i) const {
    return {vi_.data() + static_cast<std::size_t>(i) * n_, n_};
  }
  std::span<const double> row_f64(index_t i) const {
    return {vr_.data() + static_cast<std::size_t>(i) * n_, n_};
  }

  /// entries(i,j) == entries(j,i) for all i,j; cached after first evaluation.
  bool is_symmetric() const;

  /// First line "n", then n lines of n whitespace-separated values. Integer
  /// mode writes plain integers; real mode writes round-trippable decimals.
  void save(const std::string& path) const;
  static Matrix load(const std::string& path);

 private:
  std::size_t idx(index_t i, index_t j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  index_t n_;
  EntryMode mode_;
  std::vector<std::int64_t> vi_;
  std::vector<double> vr_;
  mutable std::optional<bool> symmetric_;
};

}  // namespace mdist
