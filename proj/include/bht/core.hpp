#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bht/hash.hpp"

namespace bht {

using key_type = std::uint32_t;
using value_type = std::uint32_t;
// A key-value pair packed into one 64-bit slot: key in the low 32 bits,
// value in the high 32 bits. Fixed layout so atomic CAS comparisons and
// binary dumps are well-defined.
using slot_type = std::uint64_t;

inline constexpr key_type empty_key = 0xFFFFFFFFu;
inline constexpr value_type empty_value = 0xFFFFFFFFu;
inline constexpr slot_type empty_slot = 0xFFFFFFFFFFFFFFFFull;
// Sentinel is reserved; user keys live in [0, 2^32 - 2].
inline constexpr key_type max_user_key = 0xFFFFFFFEu;

struct kv_pair {
  key_type key = empty_key;
  value_type value = empty_value;

  friend bool operator==(const kv_pair&, const kv_pair&) = default;
};

inline constexpr kv_pair empty_pair{empty_key, empty_value};

constexpr slot_type pack_pair(kv_pair p) {
  return (static_cast<slot_type>(p.value) << 32) | p.key;
}

constexpr kv_pair unpack_slot(slot_type s) {
  return {static_cast<key_type>(s & 0xFFFFFFFFu), static_cast<value_type>(s >> 32)};
}

enum class table_kind { one_cht, bcht, bp2ht, iht };

const char* to_string(table_kind kind);
std::optional<table_kind> parse_table_kind(const std::string& name);

// Number of hash functions a variant uses.
constexpr unsigned hash_count(table_kind kind) {
  switch (kind) {
    case table_kind::one_cht: return 4;
    case table_kind::bcht: return 3;
    case table_kind::bp2ht: return 2;
    case table_kind::iht: return 3;
  }
  return 0;
}

struct load_factor {
  std::uint64_t inserted = 0;
  std::uint64_t capacity = 0;

  double value() const { return capacity == 0 ? 0.0 : static_cast<double>(inserted) / static_cast<double>(capacity); }
};

struct table_config {
  table_kind kind = table_kind::bcht;
  std::uint64_t num_buckets = 0;    // m
  std::uint32_t bucket_size = 0;    // b
  std::uint64_t capacity = 0;       // m * b
  std::vector<hash_params> hashes;  // size = hash_count(kind); iht order: primary, s0, s1
  std::uint32_t threshold = 0;      // t, iht only
  std::uint32_t max_chain = 0;      // cuckoo kinds only
  std::uint64_t seed = 0;

  friend bool operator==(const table_config&, const table_config&) = default;
};

inline constexpr std::uint32_t max_bucket_size = 64;

// Derives m = ceil(n / (lf * b)) and draws fresh hash constants from `seed`.
// `threshold` is the iceberg cutoff t (defaults to floor(0.8 * b) for iht,
// ignored otherwise). `max_chain` overrides the default
// max(7 * ceil(log2(n)), 128) for the cuckoo variants.
table_config make_config(table_kind kind,
                         std::uint64_t n_keys,
                         double lf,
                         std::uint32_t bucket_size,
                         std::optional<std::uint32_t> threshold,
                         std::uint64_t seed,
                         std::optional<std::uint32_t> max_chain = std::nullopt);

std::uint32_t default_max_chain(std::uint64_t n_keys);

std::string config_to_json(const table_config& cfg);
table_config config_from_json(const std::string& text);

}  // namespace bht
