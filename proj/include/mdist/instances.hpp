#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdist/matrix.hpp"

namespace mdist::instances {

enum class Kind : std::uint8_t {
  planted_random,
  planted_symmetric,
  disjointness_ip,
  disjointness_decip,
};

Kind kind_from_string(const std::string& s);
std::string kind_to_string(Kind k);

struct InstanceSpec {
  Kind kind = Kind::planted_random;
  index_t n = 0;
  std::uint64_t d_or_t = 0;  // planted distance, or block parameter T
  std::uint64_t seed = 0;
  bool real_mode = false;

  // disjointness kinds: explicit bit-vectors, or a generated pair with this
  // many common 1-positions
  std::optional<std::vector<std::uint8_t>> x, y;
  int intersect = 0;
};

struct GeneratedPair {
  Matrix a;
  Matrix b;
  std::uint64_t true_distance = 0;
};

/// Deterministic: identical spec (including seed) reproduces the pair
/// byte-for-byte in the file format.
GeneratedPair generate(const InstanceSpec& spec);

/// Writes <prefix>_a.mat, <prefix>_b.mat and a <prefix>.json sidecar
/// carrying {seed, generator, n, true_distance, ...}.
void write_pair(const GeneratedPair& pair, const InstanceSpec& spec,
                const std::string& prefix);

}  // namespace mdist::instances
