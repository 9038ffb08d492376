#include "mdist/matrix.hpp"

#include <cctype>
#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdist {

Matrix::Matrix(index_t n, EntryMode mode) : n_(n), mode_(mode) {
  if (n == 0) throw std::invalid_argument("matrix side must be positive");
  if (mode_ == EntryMode::integer)
    vi_.assign(static_cast<std::size_t>(n) * n, 0);
  else
    vr_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

void Matrix::seti(index_t i, index_t j, std::int64_t v) {
  if (mode_ != EntryMode::integer)
    throw std::logic_error("integer write into real-mode matrix");
  vi_[idx(i, j)] = v;
  symmetric_.reset();
}

void Matrix::setr(index_t i, index_t j, double v) {
  if (mode_ != EntryMode::real)
    throw std::logic_error("real write into integer-mode matrix");
  vr_[idx(i, j)] = v;
  symmetric_.reset();
}

bool Matrix::is_symmetric() const {
  if (!symmetric_.has_value()) {
    bool sym = true;
    for (index_t i = 0; i < n_ && sym; ++i)
      for (index_t j = i + 1; j < n_; ++j)
        if (mode_ == EntryMode::integer ? geti(i, j) != geti(j, i)
                                        : getr(i, j) != getr(j, i)) {
          sym = false;
          break;
        }
    symmetric_ = sym;
  }
  return *symmetric_;
}

void Matrix::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << n_ << '\n';
  char buf[32];
  for (index_t i = 0; i < n_; ++i) {
    for (index_t j = 0; j < n_; ++j) {
      if (j) out << ' ';
      if (mode_ == EntryMode::integer) {
        out << geti(i, j);
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", getr(i, j));
        out << buf;
      }
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Matrix Matrix::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  long long n_ll = 0;
  if (!(in >> n_ll) || n_ll <= 0)
    throw std::runtime_error("bad matrix header in " + path);
  const auto n = static_cast<index_t>(n_ll);
  const std::size_t cells = static_cast<std::size_t>(n) * n;

  // streamed single pass; starts in integer mode and converts the values
  // read so far on the first token that is not a plain integer
  std::vector<std::int64_t> ints;
  std::vector<double> reals;
  ints.reserve(cells);
  bool real = false;
  std::string tok;
  for (std::size_t k = 0; k < cells; ++k) {
    if (!(in >> tok))
      throw std::runtime_error("truncated matrix file: " + path);
    if (!real && tok.find_first_of(".eE") != std::string::npos) {
      real = true;
      reals.reserve(cells);
      for (const auto v : ints) reals.push_back(static_cast<double>(v));
      ints.clear();
      ints.shrink_to_fit();
    }
    const char* s = tok.c_str();
    char* end = nullptr;
    errno = 0;
    if (real) {
      const double v = std::strtod(s, &end);
      if (end == s || *end != '\0' || errno)
        throw std::runtime_error("bad entry '" + tok + "' in " + path);
      reals.push_back(v);
    } else {
      const long long v = std::strtoll(s, &end, 10);
      if (end == s || *end != '\0' || errno)
        throw std::runtime_error("bad entry '" + tok + "' in " + path);
      ints.push_back(v);
    }
  }

  Matrix m(n, real ? EntryMode::real : EntryMode::integer);
  std::size_t k = 0;
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < n; ++j, ++k) {
      if (real)
        m.setr(i, j, reals[k]);
      else
        m.seti(i, j, ints[k]);
    }
  return m;
}

}  // namespace mdist
