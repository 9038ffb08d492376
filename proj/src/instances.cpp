#include "mdist/instances.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"
#include "mdist/rng.hpp"

namespace mdist::instances {

Kind kind_from_string(const std::string& s) {
  if (s == "planted_random") return Kind::planted_random;
  if (s == "planted_symmetric") return Kind::planted_symmetric;
  if (s == "disjointness_ip") return Kind::disjointness_ip;
  if (s == "disjointness_decip") return Kind::disjointness_decip;
  throw std::invalid_argument("unknown instance kind: " + s);
}

std::string kind_to_string(Kind k) {
  switch (k) {
    case Kind::planted_random:
      return "planted_random";
    case Kind::planted_symmetric:
      return "planted_symmetric";
    case Kind::disjointness_ip:
      return "disjointness_ip";
    case Kind::disjointness_decip:
      return "disjointness_decip";
  }
  return "?";
}

namespace {

void set_value(Matrix& m, index_t i, index_t j, std::int64_t v) {
  if (m.mode() == EntryMode::integer)
    m.seti(i, j, v);
  else
    m.setr(i, j, static_cast<double>(v));
}

// every alteration counts equally for the distance; +1 in integer mode,
// +1.5 in real mode
void alter(Matrix& b, index_t i, index_t j) {
  if (b.mode() == EntryMode::integer)
    b.seti(i, j, b.geti(i, j) + 1);
  else
    b.setr(i, j, b.getr(i, j) + 1.5);
}

Matrix random_matrix(index_t n, bool real, bool symmetric, Rng& rng) {
  Matrix m(n, real ? EntryMode::real : EntryMode::integer);
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = symmetric ? i : 0; j < n; ++j) {
      const auto v = static_cast<std::int64_t>(rng.below(10));
      set_value(m, i, j, v);
      if (symmetric && j != i) set_value(m, j, i, v);
    }
  }
  return m;
}

std::vector<std::uint64_t> sample_distinct(std::uint64_t universe,
                                           std::uint64_t count, Rng& rng) {
  if (count > universe)
    throw std::invalid_argument("cannot sample more cells than exist");
  std::vector<std::uint64_t> out;
  out.reserve(count);
  if (count * 2 <= universe) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(count * 2);
    while (out.size() < count) {
      const std::uint64_t c = rng.below(universe);
      if (seen.insert(c).second) out.push_back(c);
    }
  } else {
    std::vector<std::uint64_t> all(universe);
    for (std::uint64_t i = 0; i < universe; ++i) all[i] = i;
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t j = i + rng.below(universe - i);
      std::swap(all[i], all[j]);
      out.push_back(all[i]);
    }
  }
  return out;
}

GeneratedPair gen_planted(const InstanceSpec& spec) {
  const index_t n = spec.n;
  const std::uint64_t cells = static_cast<std::uint64_t>(n) * n;
  const std::uint64_t d = spec.d_or_t;
  if (d > cells)
    throw std::invalid_argument("planted distance exceeds the cell count");
  RngBundle rngs(spec.seed);
  const bool symmetric = spec.kind == Kind::planted_symmetric;
  Matrix a = random_matrix(n, spec.real_mode, symmetric, rngs.instance);
  Matrix b = a;

  if (!symmetric) {
    for (const std::uint64_t c : sample_distinct(cells, d, rngs.instance))
      alter(b, static_cast<index_t>(c / n), static_cast<index_t>(c % n));
    return {std::move(a), std::move(b), d};
  }

  // symmetric plant: off-diagonal flips come in mirrored pairs (2 cells
  // each); diagonal flips absorb odd parity and any overflow past the pair
  // capacity
  const std::uint64_t pair_capacity =
      static_cast<std::uint64_t>(n) * (n - 1) / 2;
  std::uint64_t diag = d % 2;
  std::uint64_t pairs = (d - diag) / 2;
  if (pairs > pair_capacity) {
    diag = d - 2 * pair_capacity;
    pairs = pair_capacity;
    if (diag > n)
      throw std::invalid_argument("planted distance exceeds the cell count");
  }
  for (const std::uint64_t c :
       sample_distinct(static_cast<std::uint64_t>(n), diag, rngs.instance))
    alter(b, static_cast<index_t>(c), static_cast<index_t>(c));
  for (const std::uint64_t c :
       sample_distinct(pair_capacity, pairs, rngs.instance)) {
    // c-th cell of the strict upper triangle, row-major
    index_t i = 0;
    std::uint64_t rem = c;
    std::uint64_t row_len = n - 1;
    while (rem >= row_len) {
      rem -= row_len;
      --row_len;
      ++i;
    }
    const auto j = static_cast<index_t>(i + 1 + rem);
    alter(b, i, j);
    alter(b, j, i);
  }
  return {std::move(a), std::move(b), d};
}

struct BlockInputs {
  std::vector<std::uint8_t> x, y;
  std::uint64_t common = 0;
};

BlockInputs block_inputs(const InstanceSpec& spec, std::uint64_t positions,
                         Rng& rng) {
  BlockInputs in;
  if (spec.x || spec.y) {
    if (!spec.x || !spec.y)
      throw std::invalid_argument("provide both bit-vectors or neither");
    if (spec.x->size() != positions || spec.y->size() != positions)
      throw std::invalid_argument("bit-vector length mismatch");
    in.x = *spec.x;
    in.y = *spec.y;
  } else {
    if (spec.intersect < 0 ||
        static_cast<std::uint64_t>(spec.intersect) > positions)
      throw std::invalid_argument("bad intersection count");
    in.x.assign(positions, 0);
    in.y.assign(positions, 0);
    for (const std::uint64_t k :
         sample_distinct(positions, spec.intersect, rng)) {
      in.x[k] = 1;
      in.y[k] = 1;
    }
    // remaining positions avoid the joint pattern
    for (std::uint64_t k = 0; k < positions; ++k) {
      if (in.x[k]) continue;
      switch (rng.below(3)) {
        case 0:
          break;
        case 1:
          in.x[k] = 1;
          break;
        default:
          in.y[k] = 1;
          break;
      }
    }
  }
  for (std::uint64_t k = 0; k < positions; ++k)
    in.common += (in.x[k] && in.y[k]);
  return in;
}

std::uint64_t checked_block_side(const InstanceSpec& spec) {
  const std::uint64_t t = spec.d_or_t;
  const auto s = static_cast<std::uint64_t>(std::llround(std::sqrt(
      static_cast<double>(t))));
  if (t == 0 || s * s != t)
    throw std::invalid_argument("t must be a positive perfect square");
  if (spec.n % s != 0)
    throw std::invalid_argument("sqrt(t) must divide n");
  return s;
}

GeneratedPair gen_block_diagonal(const InstanceSpec& spec) {
  const index_t n = spec.n;
  const std::uint64_t s = checked_block_side(spec);
  const std::uint64_t blocks = n / s;
  RngBundle rngs(spec.seed);
  const BlockInputs in = block_inputs(spec, blocks, rngs.instance);

  const EntryMode mode =
      spec.real_mode ? EntryMode::real : EntryMode::integer;
  Matrix a(n, mode);
  Matrix b(n, mode);
  for (std::uint64_t k = 0; k < blocks; ++k) {
    if (!(in.x[k] && in.y[k])) continue;
    const auto base = static_cast<index_t>(k * s);
    for (index_t i = 0; i < s; ++i)
      for (index_t j = 0; j < s; ++j) set_value(b, base + i, base + j, 1);
  }
  return {std::move(a), std::move(b), in.common * spec.d_or_t};
}

GeneratedPair gen_block_grid(const InstanceSpec& spec) {
  const index_t n = spec.n;
  const std::uint64_t s = checked_block_side(spec);
  const std::uint64_t grid = n / s;
  const std::uint64_t blocks = grid * grid;
  RngBundle rngs(spec.seed);
  const BlockInputs in = block_inputs(spec, blocks, rngs.instance);

  const EntryMode mode =
      spec.real_mode ? EntryMode::real : EntryMode::integer;
  Matrix a(n, mode);
  Matrix b(n, mode);
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < n; ++j) {
      set_value(a, i, j, 1);
      set_value(b, i, j, 1);
    }
  // row-major mapping of position k onto the block grid
  for (std::uint64_t k = 0; k < blocks; ++k) {
    if (!(in.x[k] && in.y[k])) continue;
    const auto bi = static_cast<index_t>((k / grid) * s);
    const auto bj = static_cast<index_t>((k % grid) * s);
    for (index_t i = 0; i < s; ++i)
      for (index_t j = 0; j < s; ++j) set_value(b, bi + i, bj + j, 0);
  }
  return {std::move(a), std::move(b), in.common * spec.d_or_t};
}

}  // namespace

GeneratedPair generate(const InstanceSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("n must be positive");
  switch (spec.kind) {
    case Kind::planted_random:
    case Kind::planted_symmetric:
      return gen_planted(spec);
    case Kind::disjointness_ip:
      return gen_block_diagonal(spec);
    case Kind::disjointness_decip:
      return gen_block_grid(spec);
  }
  throw std::invalid_argument("unknown instance kind");
}

void write_pair(const GeneratedPair& pair, const InstanceSpec& spec,
                const std::string& prefix) {
  pair.a.save(prefix + "_a.mat");
  pair.b.save(prefix + "_b.mat");
  nlohmann::json j;
  j["schema_version"] = 1;
  j["generator"] = kind_to_string(spec.kind);
  j["n"] = spec.n;
  j["seed"] = spec.seed;
  j["d_or_t"] = spec.d_or_t;
  j["intersect"] = spec.intersect;
  j["real_mode"] = spec.real_mode;
  j["true_distance"] = pair.true_distance;
  std::ofstream out(prefix + ".json");
  if (!out) throw std::runtime_error("cannot write sidecar: " + prefix);
  out << j.dump(2) << '\n';
}

}  // namespace mdist::instances
