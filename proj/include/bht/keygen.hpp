#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bht/core.hpp"

namespace bht {

// Unique random keys drawn uniformly from [0, 2^32 - 2]; the sentinel is
// excluded. Values are derived, not stored: see value_for_key.
struct key_set {
  std::vector<key_type> keys;
  std::uint64_t seed = 0;

  std::size_t size() const { return keys.size(); }
};

// Deterministic value pairing so lookups can be checked without an oracle
// map. The xor constant maps exactly one key to the sentinel; that image is
// masked back into range.
constexpr value_type value_for_key(key_type k) {
  value_type v = k ^ 0x5A5A5A5Au;
  return v == empty_value ? (v & 0x7FFFFFFFu) : v;
}

// n unique keys via rejection sampling from an mt19937_64 stream.
key_set generate_keys(std::uint64_t seed, std::size_t n);

struct query {
  key_type key = 0;
  value_type expected_value = 0;  // meaningful when expected_present
  bool expected_present = false;
};

// round(positive_ratio * q) queries sampled without replacement from the
// key set, the rest guaranteed-absent keys; order shuffled deterministically.
std::vector<query> generate_queries(const key_set& keys,
                                    double positive_ratio,
                                    std::size_t q,
                                    std::uint64_t seed);

// Flat binary file of little-endian 32-bit keys.
void save_keys(const std::string& path, const key_set& keys);
key_set load_keys(const std::string& path, std::uint64_t seed);

}  // namespace bht
