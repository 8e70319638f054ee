#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>

#include "bht/keygen.hpp"
#include "bht/table.hpp"

namespace bht {

// Reference checkers for tests and acceptance runs. Nothing here mutates a
// table or touches the probe counters of the code under test.

struct reference_map {
  std::unordered_map<key_type, value_type> entries;

  explicit reference_map(const key_set& keys);
  bool contains(key_type k) const { return entries.count(k) != 0; }
};

struct membership_report {
  std::uint64_t false_negatives = 0;
  std::uint64_t wrong_values = 0;
  std::uint64_t false_positives = 0;

  bool clean() const { return false_negatives == 0 && wrong_values == 0 && false_positives == 0; }
};

// Queries every inserted key plus n_negative guaranteed-absent keys.
membership_report check_membership(const hash_table& table,
                                   const key_set& keys,
                                   std::uint64_t n_negative,
                                   std::uint64_t seed);

// Scans the store and counts pairs sitting outside their admissible
// buckets.
std::uint64_t check_admissibility(const hash_table& table);

// bcht/one_cht find without the early exit, for differential testing of
// the early-exit path.
std::optional<value_type> bcht_find_no_early_exit(const hash_table& table, key_type key);

// Desk-scale analogue of the success-rate protocol: largest load factor on
// a small fixed-m instance where at least 99% of `trials` random builds
// succeed, found by binary search on the key count.
double brute_force_peak_load(table_kind kind,
                             std::uint32_t bucket_size,
                             std::optional<std::uint32_t> threshold,
                             std::uint64_t num_buckets,
                             unsigned trials,
                             std::uint64_t seed);

}  // namespace bht
